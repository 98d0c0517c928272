#include "cartan/partial_bijection.hpp"

#include <set>

#include "cartan/error.hpp"

namespace cartan {

PartialBijection PartialBijection::from_pairs(const std::vector<std::pair<Point, Point>>& pairs) {
  PartialBijection result;
  std::set<Point> images;
  for (const auto& [x, y] : pairs) {
    if (!result.map_.emplace(x, y).second) {
      throw Error("partial bijection: point " + std::to_string(x) + " appears twice in the domain");
    }
    if (!images.insert(y).second) {
      throw Error("partial bijection: point " + std::to_string(y) + " is hit twice");
    }
  }
  return result;
}

PartialBijection PartialBijection::identity(const std::vector<Point>& domain) {
  PartialBijection result;
  for (Point x : domain) result.map_.emplace(x, x);
  return result;
}

std::optional<PartialBijection::Point> PartialBijection::operator()(Point x) const {
  auto it = map_.find(x);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::vector<PartialBijection::Point> PartialBijection::domain() const {
  std::vector<Point> out;
  out.reserve(map_.size());
  for (const auto& kv : map_) out.push_back(kv.first);
  return out;
}

std::vector<PartialBijection::Point> PartialBijection::image() const {
  std::set<Point> out;
  for (const auto& kv : map_) out.insert(kv.second);
  return {out.begin(), out.end()};
}

PartialBijection PartialBijection::compose(const PartialBijection& inner) const {
  PartialBijection result;
  for (const auto& [x, y] : inner.map_) {
    auto it = map_.find(y);
    if (it != map_.end()) result.map_.emplace(x, it->second);
  }
  return result;
}

PartialBijection PartialBijection::inverse() const {
  PartialBijection result;
  for (const auto& [x, y] : map_) result.map_.emplace(y, x);
  return result;
}

PartialBijection PartialBijection::restrict_to(const std::vector<Point>& subset) const {
  PartialBijection result;
  for (Point x : subset) {
    auto it = map_.find(x);
    if (it != map_.end()) result.map_.emplace(x, it->second);
  }
  return result;
}

bool PartialBijection::is_identity_on_domain() const {
  for (const auto& [x, y] : map_) {
    if (x != y) return false;
  }
  return true;
}

}  // namespace cartan
