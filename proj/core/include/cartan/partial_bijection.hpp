#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cartan {

/// Injective map from a subset of a finite point set into that set.
///
/// On a finite discrete space every partial bijection is a partial
/// homeomorphism, so this is also the element type of pseudogroups.
class PartialBijection {
 public:
  using Point = std::size_t;

  PartialBijection() = default;

  /// Throws cartan::Error if two points share an image or a point repeats.
  static PartialBijection from_pairs(const std::vector<std::pair<Point, Point>>& pairs);
  static PartialBijection identity(const std::vector<Point>& domain);

  std::optional<Point> operator()(Point x) const;

  std::vector<Point> domain() const;
  std::vector<Point> image() const;
  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }

  /// `*this ∘ inner`: defined where inner is defined and lands in our domain.
  PartialBijection compose(const PartialBijection& inner) const;
  PartialBijection inverse() const;
  PartialBijection restrict_to(const std::vector<Point>& subset) const;

  bool is_identity_on_domain() const;

  const std::map<Point, Point>& pairs() const noexcept { return map_; }

  friend bool operator==(const PartialBijection&, const PartialBijection&) = default;
  friend auto operator<=>(const PartialBijection&, const PartialBijection&) = default;

 private:
  std::map<Point, Point> map_;
};

}  // namespace cartan
