#pragma once

// Finite étale groupoids with the discrete topology, their bisections, and the
// canonical action of bisections on the unit space.
//
// Conventions: an arrow γ goes from source s(γ) to range r(γ); the product
// a·b is defined iff s(a) == r(b). Units and arrows are kept in lexicographic
// order of their ids, and every enumeration below follows that order.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cartan/partial_bijection.hpp"

namespace cartan {

using UnitIndex = std::size_t;
using ArrowIndex = std::size_t;

struct ArrowRecord {
  std::string id;
  std::string src;
  std::string dst;
};

/// Raw, possibly inconsistent, description of a groupoid as it appears in a
/// document. `unit_arrows` is optional; when absent the unit arrow of u is
/// inferred as the unique idempotent loop at u.
struct GroupoidData {
  std::vector<std::string> units;
  std::vector<ArrowRecord> arrows;
  std::vector<std::array<std::string, 3>> product;  // a, b, a·b
  std::vector<std::pair<std::string, std::string>> inverse;
  std::vector<std::pair<std::string, std::string>> unit_arrows;
};

struct Violation {
  std::string axiom;
  std::vector<std::string> witnesses;
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

/// Lists every violated groupoid axiom; empty iff `data` describes a groupoid.
ValidationReport validate_groupoid(const GroupoidData& data);

class FiniteGroupoid {
 public:
  /// Throws cartan::Error (listing the first violations) if invalid.
  static FiniteGroupoid from_data(const GroupoidData& data);

  GroupoidData to_data() const;

  std::size_t unit_count() const noexcept { return unit_ids_.size(); }
  std::size_t arrow_count() const noexcept { return arrow_ids_.size(); }

  const std::string& unit_id(UnitIndex u) const { return unit_ids_.at(u); }
  const std::string& arrow_id(ArrowIndex a) const { return arrow_ids_.at(a); }
  const std::vector<std::string>& unit_ids() const noexcept { return unit_ids_; }
  const std::vector<std::string>& arrow_ids() const noexcept { return arrow_ids_; }

  std::optional<UnitIndex> find_unit(std::string_view id) const;
  std::optional<ArrowIndex> find_arrow(std::string_view id) const;

  UnitIndex source(ArrowIndex a) const { return source_[a]; }
  UnitIndex range(ArrowIndex a) const { return range_[a]; }
  ArrowIndex inverse(ArrowIndex a) const { return inverse_[a]; }
  ArrowIndex unit_arrow(UnitIndex u) const { return unit_arrow_[u]; }
  bool is_unit_arrow(ArrowIndex a) const { return unit_of_arrow_[a].has_value(); }
  std::optional<UnitIndex> unit_of_arrow(ArrowIndex a) const { return unit_of_arrow_[a]; }

  bool composable(ArrowIndex a, ArrowIndex b) const { return source_[a] == range_[b]; }
  /// a·b, or nullopt when s(a) != r(b).
  std::optional<ArrowIndex> product(ArrowIndex a, ArrowIndex b) const;
  /// a·b; the caller guarantees composability.
  ArrowIndex compose(ArrowIndex a, ArrowIndex b) const {
    return static_cast<ArrowIndex>(table_[a * arrow_count() + b]);
  }

  /// G_x = {γ : s(γ) = x}, sorted.
  const std::vector<ArrowIndex>& source_fiber(UnitIndex x) const { return source_fiber_[x]; }
  /// G^x = {γ : r(γ) = x}, sorted.
  const std::vector<ArrowIndex>& range_fiber(UnitIndex x) const { return range_fiber_[x]; }

  /// Orbits of the unit space, each sorted, ordered by least member.
  std::vector<std::vector<UnitIndex>> orbits() const;

  friend bool operator==(const FiniteGroupoid&, const FiniteGroupoid&) = default;

 private:
  FiniteGroupoid() = default;

  std::vector<std::string> unit_ids_;
  std::vector<std::string> arrow_ids_;
  std::vector<UnitIndex> source_;
  std::vector<UnitIndex> range_;
  std::vector<ArrowIndex> inverse_;
  std::vector<ArrowIndex> unit_arrow_;
  std::vector<std::optional<UnitIndex>> unit_of_arrow_;
  std::vector<std::int32_t> table_;  // arrow_count^2, -1 where undefined
  std::vector<std::vector<ArrowIndex>> source_fiber_;
  std::vector<std::vector<ArrowIndex>> range_fiber_;
  std::unordered_map<std::string, UnitIndex> unit_lookup_;
  std::unordered_map<std::string, ArrowIndex> arrow_lookup_;
};

// ---------------------------------------------------------------------------
// Isotropy and principality.

/// G' = {γ : r(γ) = s(γ)}, sorted. Always contains every unit arrow.
std::vector<ArrowIndex> isotropy_bundle(const FiniteGroupoid& g);

bool is_principal(const FiniteGroupoid& g);

/// Interior of G' is G' itself for the discrete topology, so this coincides
/// with is_principal. Essentially principal but non-principal groupoids only
/// show up in the symbolic (graph) setting.
bool is_essentially_principal(const FiniteGroupoid& g);

/// True iff no non-unit isotropy arrow acts as the identity when taken as a
/// singleton bisection, i.e. the canonical action of bisections is faithful.
bool is_effective(const FiniteGroupoid& g);

// ---------------------------------------------------------------------------
// Bisections.

/// Subset of arrows on which both r and s are injective.
class Bisection {
 public:
  Bisection() = default;

  /// Throws cartan::Error if `arrows` is not a bisection of g.
  static Bisection from_arrows(const FiniteGroupoid& g, std::vector<ArrowIndex> arrows);
  static Bisection units(const FiniteGroupoid& g);

  const std::vector<ArrowIndex>& arrows() const noexcept { return arrows_; }
  std::size_t size() const noexcept { return arrows_.size(); }
  bool empty() const noexcept { return arrows_.empty(); }
  bool contains(ArrowIndex a) const;

  friend bool operator==(const Bisection&, const Bisection&) = default;
  friend auto operator<=>(const Bisection&, const Bisection&) = default;

 private:
  std::vector<ArrowIndex> arrows_;  // sorted, unique
};

bool is_bisection(const FiniteGroupoid& g, const std::vector<ArrowIndex>& arrows);

/// ST = {γγ' : γ ∈ S, γ' ∈ T, s(γ) = r(γ')}.
Bisection bisection_product(const FiniteGroupoid& g, const Bisection& s, const Bisection& t);
Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& s);

/// α_S : s(S) → r(S), x ↦ r(Sx).
PartialBijection canonical_action(const FiniteGroupoid& g, const Bisection& s);

/// Every bisection of g, in lexicographic order of sorted arrow lists. Throws
/// if there are more than `limit`.
std::vector<Bisection> all_bisections(const FiniteGroupoid& g, std::size_t limit = 1u << 20);

// ---------------------------------------------------------------------------
// Constructors.

/// Arrows "(x,y)" from y to x for every ordered pair of points.
FiniteGroupoid pair_groupoid(const std::vector<std::string>& points);

/// Full equivalence relation on each class of a partition.
FiniteGroupoid relation_groupoid(const std::vector<std::vector<std::string>>& classes);

/// Equivalence relation generated by `pairs` on `points`.
FiniteGroupoid relation_groupoid(const std::vector<std::string>& points,
                                 const std::vector<std::pair<std::string, std::string>>& pairs);

struct GroupTable {
  std::vector<std::string> elements;
  std::vector<std::vector<std::size_t>> multiply;  // multiply[g][h] = g·h
};

struct GroupAction {
  std::vector<std::string> points;
  std::vector<std::vector<std::size_t>> act;  // act[g][x] = g·x
};

/// Γ ⋉ X with arrows "(g,x)" from x to g·x and (h,gx)(g,x) = (hg,x).
/// Throws cartan::Error for a malformed group table or action.
FiniteGroupoid transformation_groupoid(const GroupTable& group, const GroupAction& action);

/// Groupoid of germs of the pseudogroup generated by `generators` on the
/// discrete set `points`. Germs are determined by (φ(y), y), so the result is
/// the orbit relation of the pseudogroup; it is always principal.
FiniteGroupoid germ_groupoid_discrete(const std::vector<std::string>& points,
                                      const std::vector<PartialBijection>& generators);

// ---------------------------------------------------------------------------
// Isomorphism search.

struct GroupoidIsomorphism {
  enum class Status { found, not_isomorphic, undecided };
  Status status = Status::not_isomorphic;
  std::vector<UnitIndex> unit_map;    // unit of g -> unit of h
  std::vector<ArrowIndex> arrow_map;  // arrow of g -> arrow of h
};

/// Exhaustive backtracking over unit bijections and then arrows. Reports
/// `undecided` when the groupoids have more than `max_units` units.
GroupoidIsomorphism find_isomorphism(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                     std::size_t max_units = 10);

/// Checks that `iso` is a groupoid isomorphism g -> h.
bool verify_isomorphism(const FiniteGroupoid& g, const FiniteGroupoid& h,
                        const GroupoidIsomorphism& iso);

}  // namespace cartan
