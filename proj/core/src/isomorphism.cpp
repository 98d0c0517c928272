#include <algorithm>
#include <map>

#include "cartan/groupoid.hpp"

namespace cartan {
namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

// hom[x][y] = arrows with range x and source y.
std::vector<std::vector<std::vector<ArrowIndex>>> hom_sets(const FiniteGroupoid& g) {
  std::vector<std::vector<std::vector<ArrowIndex>>> hom(
      g.unit_count(), std::vector<std::vector<ArrowIndex>>(g.unit_count()));
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) hom[g.range(a)][g.source(a)].push_back(a);
  return hom;
}

class Search {
 public:
  Search(const FiniteGroupoid& g, const FiniteGroupoid& h)
      : g_(g), h_(h), hom_g_(hom_sets(g)), hom_h_(hom_sets(h)) {}

  bool run(GroupoidIsomorphism& out) {
    unit_map_.assign(g_.unit_count(), kUnassigned);
    used_units_.assign(h_.unit_count(), false);
    if (!assign_unit(0)) return false;
    out.unit_map = unit_map_;
    out.arrow_map = arrow_map_;
    return true;
  }

 private:
  bool assign_unit(UnitIndex x) {
    if (x == g_.unit_count()) return assign_arrows();
    for (UnitIndex y = 0; y < h_.unit_count(); ++y) {
      if (used_units_[y]) continue;
      unit_map_[x] = y;
      if (consistent_hom_sizes(x)) {
        used_units_[y] = true;
        if (assign_unit(x + 1)) return true;
        used_units_[y] = false;
      }
    }
    unit_map_[x] = kUnassigned;
    return false;
  }

  bool consistent_hom_sizes(UnitIndex x) const {
    for (UnitIndex z = 0; z <= x; ++z) {
      const auto fx = unit_map_[x], fz = unit_map_[z];
      if (hom_g_[x][z].size() != hom_h_[fx][fz].size()) return false;
      if (hom_g_[z][x].size() != hom_h_[fz][fx].size()) return false;
    }
    return true;
  }

  bool assign_arrows() {
    arrow_map_.assign(g_.arrow_count(), kUnassigned);
    used_arrows_.assign(h_.arrow_count(), false);
    for (UnitIndex x = 0; x < g_.unit_count(); ++x) {
      arrow_map_[g_.unit_arrow(x)] = h_.unit_arrow(unit_map_[x]);
      used_arrows_[h_.unit_arrow(unit_map_[x])] = true;
    }
    order_.clear();
    for (ArrowIndex a = 0; a < g_.arrow_count(); ++a) {
      if (!g_.is_unit_arrow(a)) order_.push_back(a);
    }
    return assign_arrow(0);
  }

  bool assign_arrow(std::size_t k) {
    if (k == order_.size()) return true;
    const ArrowIndex a = order_[k];
    const auto& candidates = hom_h_[unit_map_[g_.range(a)]][unit_map_[g_.source(a)]];
    for (ArrowIndex b : candidates) {
      if (used_arrows_[b]) continue;
      arrow_map_[a] = b;
      used_arrows_[b] = true;
      if (products_consistent(a) && assign_arrow(k + 1)) return true;
      used_arrows_[b] = false;
    }
    arrow_map_[a] = kUnassigned;
    return false;
  }

  // Checks φ(pq) = φ(p)φ(q) for every composable pair involving `a` whose
  // three arrows are already mapped.
  bool products_consistent(ArrowIndex a) const {
    auto check = [&](ArrowIndex p, ArrowIndex q) {
      const auto pq = g_.compose(p, q);
      if (arrow_map_[p] == kUnassigned || arrow_map_[q] == kUnassigned ||
          arrow_map_[pq] == kUnassigned) {
        return true;
      }
      return h_.compose(arrow_map_[p], arrow_map_[q]) == arrow_map_[pq];
    };
    for (ArrowIndex b = 0; b < g_.arrow_count(); ++b) {
      if (g_.composable(a, b) && !check(a, b)) return false;
      if (g_.composable(b, a) && !check(b, a)) return false;
    }
    // Also products that land on `a`.
    for (ArrowIndex p : g_.range_fiber(g_.range(a))) {
      const ArrowIndex q = g_.compose(g_.inverse(p), a);
      if (!check(p, q)) return false;
    }
    return true;
  }

  const FiniteGroupoid& g_;
  const FiniteGroupoid& h_;
  std::vector<std::vector<std::vector<ArrowIndex>>> hom_g_, hom_h_;
  std::vector<UnitIndex> unit_map_;
  std::vector<bool> used_units_;
  std::vector<ArrowIndex> arrow_map_;
  std::vector<bool> used_arrows_;
  std::vector<ArrowIndex> order_;
};

}  // namespace

GroupoidIsomorphism find_isomorphism(const FiniteGroupoid& g, const FiniteGroupoid& h,
                                     std::size_t max_units) {
  GroupoidIsomorphism out;
  if (g.unit_count() != h.unit_count() || g.arrow_count() != h.arrow_count()) return out;
  if (g.unit_count() > max_units) {
    out.status = GroupoidIsomorphism::Status::undecided;
    return out;
  }
  Search search(g, h);
  if (search.run(out)) out.status = GroupoidIsomorphism::Status::found;
  return out;
}

bool verify_isomorphism(const FiniteGroupoid& g, const FiniteGroupoid& h,
                        const GroupoidIsomorphism& iso) {
  if (iso.status != GroupoidIsomorphism::Status::found) return false;
  if (iso.unit_map.size() != g.unit_count() || iso.arrow_map.size() != g.arrow_count()) return false;
  if (g.unit_count() != h.unit_count() || g.arrow_count() != h.arrow_count()) return false;
  std::vector<bool> hit_u(h.unit_count(), false), hit_a(h.arrow_count(), false);
  for (auto y : iso.unit_map) {
    if (y >= h.unit_count() || hit_u[y]) return false;
    hit_u[y] = true;
  }
  for (auto b : iso.arrow_map) {
    if (b >= h.arrow_count() || hit_a[b]) return false;
    hit_a[b] = true;
  }
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    const auto b = iso.arrow_map[a];
    if (h.source(b) != iso.unit_map[g.source(a)] || h.range(b) != iso.unit_map[g.range(a)]) return false;
    for (ArrowIndex c = 0; c < g.arrow_count(); ++c) {
      if (!g.composable(a, c)) continue;
      if (h.compose(b, iso.arrow_map[c]) != iso.arrow_map[g.compose(a, c)]) return false;
    }
  }
  for (UnitIndex x = 0; x < g.unit_count(); ++x) {
    if (iso.arrow_map[g.unit_arrow(x)] != h.unit_arrow(iso.unit_map[x])) return false;
  }
  return true;
}

}  // namespace cartan
