#include "cartan/groupoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cartan/error.hpp"

namespace cartan {
namespace {

// Index-based view of GroupoidData used by the validator. Construction only
// records structural problems; the axiom checks run on what could be resolved.
struct ResolvedData {
  std::vector<std::string> units;   // sorted
  std::vector<std::string> arrows;  // sorted
  std::vector<std::size_t> src, dst;
  std::map<std::string, std::size_t> unit_index, arrow_index;
  std::vector<std::int32_t> table;  // n*n
  std::vector<std::int32_t> inv;
  std::vector<std::int32_t> unit_arrow;
};

void add(ValidationReport& report, std::string axiom, std::vector<std::string> witnesses,
         std::string detail = {}) {
  report.push_back({std::move(axiom), std::move(witnesses), std::move(detail)});
}

// Returns false if the data is too broken to evaluate the axioms.
bool resolve(const GroupoidData& data, ResolvedData& out, ValidationReport& report) {
  bool structural_ok = true;

  std::set<std::string> seen_units;
  for (const auto& u : data.units) {
    if (!seen_units.insert(u).second) {
      add(report, "duplicate-unit", {u});
      structural_ok = false;
    }
  }
  out.units.assign(seen_units.begin(), seen_units.end());
  for (std::size_t i = 0; i < out.units.size(); ++i) out.unit_index[out.units[i]] = i;

  std::map<std::string, const ArrowRecord*> by_id;
  for (const auto& a : data.arrows) {
    if (!by_id.emplace(a.id, &a).second) {
      add(report, "duplicate-arrow", {a.id});
      structural_ok = false;
    }
  }
  for (const auto& [id, rec] : by_id) {
    out.arrow_index[id] = out.arrows.size();
    out.arrows.push_back(id);
    auto s = out.unit_index.find(rec->src);
    auto d = out.unit_index.find(rec->dst);
    if (s == out.unit_index.end() || d == out.unit_index.end()) {
      add(report, "unknown-unit", {id},
          "arrow endpoint " + (s == out.unit_index.end() ? rec->src : rec->dst) + " is not a unit");
      structural_ok = false;
      out.src.push_back(0);
      out.dst.push_back(0);
      continue;
    }
    out.src.push_back(s->second);
    out.dst.push_back(d->second);
  }
  if (!structural_ok) return false;

  const std::size_t n = out.arrows.size();
  out.table.assign(n * n, -1);
  for (const auto& [a, b, c] : data.product) {
    auto ia = out.arrow_index.find(a);
    auto ib = out.arrow_index.find(b);
    auto ic = out.arrow_index.find(c);
    if (ia == out.arrow_index.end() || ib == out.arrow_index.end() ||
        ic == out.arrow_index.end()) {
      add(report, "unknown-arrow", {a, b, c}, "product entry references an unknown arrow");
      structural_ok = false;
      continue;
    }
    auto& slot = out.table[ia->second * n + ib->second];
    if (slot >= 0 && static_cast<std::size_t>(slot) != ic->second) {
      add(report, "product-conflict", {a, b}, "product listed twice with different values");
    }
    slot = static_cast<std::int32_t>(ic->second);
  }

  out.inv.assign(n, -1);
  for (const auto& [a, b] : data.inverse) {
    auto ia = out.arrow_index.find(a);
    auto ib = out.arrow_index.find(b);
    if (ia == out.arrow_index.end() || ib == out.arrow_index.end()) {
      add(report, "unknown-arrow", {a, b}, "inverse entry references an unknown arrow");
      structural_ok = false;
      continue;
    }
    auto& slot = out.inv[ia->second];
    if (slot >= 0 && static_cast<std::size_t>(slot) != ib->second) {
      add(report, "inverse-conflict", {a}, "inverse listed twice with different values");
    }
    slot = static_cast<std::int32_t>(ib->second);
  }
  return structural_ok;
}

void resolve_unit_arrows(const GroupoidData& data, ResolvedData& r, ValidationReport& report) {
  const std::size_t n = r.arrows.size();
  r.unit_arrow.assign(r.units.size(), -1);
  if (!data.unit_arrows.empty()) {
    for (const auto& [u, a] : data.unit_arrows) {
      auto iu = r.unit_index.find(u);
      auto ia = r.arrow_index.find(a);
      if (iu == r.unit_index.end() || ia == r.arrow_index.end()) {
        add(report, "unit-embedding", {u, a}, "unit arrow entry references unknown ids");
        continue;
      }
      r.unit_arrow[iu->second] = static_cast<std::int32_t>(ia->second);
    }
  } else {
    for (std::size_t a = 0; a < n; ++a) {
      if (r.src[a] != r.dst[a] || r.table[a * n + a] != static_cast<std::int32_t>(a)) continue;
      auto& slot = r.unit_arrow[r.src[a]];
      if (slot >= 0) {
        add(report, "unit-embedding", {r.units[r.src[a]], r.arrows[slot], r.arrows[a]},
            "more than one idempotent loop at this unit");
        continue;
      }
      slot = static_cast<std::int32_t>(a);
    }
  }
  std::set<std::int32_t> used;
  for (std::size_t u = 0; u < r.units.size(); ++u) {
    const auto e = r.unit_arrow[u];
    if (e < 0) {
      add(report, "unit-embedding", {r.units[u]}, "no unit arrow");
      continue;
    }
    if (r.src[e] != u || r.dst[e] != u) {
      add(report, "unit-embedding", {r.units[u], r.arrows[e]}, "unit arrow is not a loop at its unit");
    }
    if (!used.insert(e).second) {
      add(report, "unit-embedding", {r.arrows[e]}, "unit embedding is not injective");
    }
  }
}

void check_axioms(const ResolvedData& r, ValidationReport& report) {
  const std::size_t n = r.arrows.size();
  auto prod = [&](std::size_t a, std::size_t b) { return r.table[a * n + b]; };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const bool comp = r.src[a] == r.dst[b];
      const auto c = prod(a, b);
      if (comp && c < 0) {
        add(report, "product-domain", {r.arrows[a], r.arrows[b]}, "composable pair without product");
      } else if (!comp && c >= 0) {
        add(report, "product-domain", {r.arrows[a], r.arrows[b]}, "product on non-composable pair");
      } else if (comp && (r.dst[c] != r.dst[a] || r.src[c] != r.src[b])) {
        add(report, "product-endpoints", {r.arrows[a], r.arrows[b], r.arrows[c]},
            "r(ab) must be r(a) and s(ab) must be s(b)");
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const auto ab = prod(a, b);
      if (ab < 0 || r.src[a] != r.dst[b]) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (r.src[b] != r.dst[c]) continue;
        const auto bc = prod(b, c);
        if (bc < 0 || r.src[ab] != r.dst[c] || r.src[a] != r.dst[bc]) continue;
        const auto left = prod(ab, c);
        const auto right = prod(a, bc);
        if (left != right) {
          add(report, "associativity", {r.arrows[a], r.arrows[b], r.arrows[c]});
        }
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    const auto ia = r.inv[a];
    if (ia < 0) {
      add(report, "inverse-total", {r.arrows[a]}, "arrow without inverse");
      continue;
    }
    if (r.inv[ia] != static_cast<std::int32_t>(a)) {
      add(report, "inverse-involution", {r.arrows[a], r.arrows[ia]});
    }
    if (r.src[ia] != r.dst[a] || r.dst[ia] != r.src[a]) {
      add(report, "inverse-endpoints", {r.arrows[a], r.arrows[ia]});
      continue;
    }
    const auto e_r = r.unit_arrow[r.dst[a]];
    const auto e_s = r.unit_arrow[r.src[a]];
    if (e_r >= 0 && prod(a, ia) != e_r) {
      add(report, "inverse-law", {r.arrows[a], r.arrows[ia]}, "γ·γ⁻¹ is not the unit at r(γ)");
    }
    if (e_s >= 0 && prod(ia, a) != e_s) {
      add(report, "inverse-law", {r.arrows[ia], r.arrows[a]}, "γ⁻¹·γ is not the unit at s(γ)");
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    const auto e_r = r.unit_arrow[r.dst[a]];
    const auto e_s = r.unit_arrow[r.src[a]];
    if (e_r >= 0 && prod(e_r, a) != static_cast<std::int32_t>(a)) {
      add(report, "unit-neutral", {r.arrows[e_r], r.arrows[a]}, "unit is not left neutral");
    }
    if (e_s >= 0 && prod(a, e_s) != static_cast<std::int32_t>(a)) {
      add(report, "unit-neutral", {r.arrows[a], r.arrows[e_s]}, "unit is not right neutral");
    }
  }

  std::vector<bool> hit_src(r.units.size(), false), hit_dst(r.units.size(), false);
  for (std::size_t a = 0; a < n; ++a) {
    hit_src[r.src[a]] = true;
    hit_dst[r.dst[a]] = true;
  }
  for (std::size_t u = 0; u < r.units.size(); ++u) {
    if (!hit_src[u]) add(report, "source-surjective", {r.units[u]});
    if (!hit_dst[u]) add(report, "range-surjective", {r.units[u]});
  }
}

}  // namespace

ValidationReport validate_groupoid(const GroupoidData& data) {
  ValidationReport report;
  ResolvedData r;
  if (!resolve(data, r, report)) return report;
  resolve_unit_arrows(data, r, report);
  check_axioms(r, report);
  return report;
}

FiniteGroupoid FiniteGroupoid::from_data(const GroupoidData& data) {
  ValidationReport report;
  ResolvedData r;
  const bool structural_ok = resolve(data, r, report);
  if (structural_ok) {
    resolve_unit_arrows(data, r, report);
    check_axioms(r, report);
  }
  if (!report.empty()) {
    std::string msg = "invalid groupoid: " + report.front().axiom;
    for (const auto& w : report.front().witnesses) msg += " " + w;
    if (report.size() > 1) msg += " (+" + std::to_string(report.size() - 1) + " more)";
    throw Error(msg);
  }

  FiniteGroupoid g;
  g.unit_ids_ = r.units;
  g.arrow_ids_ = r.arrows;
  g.source_ = r.src;
  g.range_ = r.dst;
  g.table_ = r.table;
  const std::size_t n = r.arrows.size();
  g.inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a) g.inverse_[a] = static_cast<ArrowIndex>(r.inv[a]);
  g.unit_arrow_.resize(r.units.size());
  g.unit_of_arrow_.assign(n, std::nullopt);
  for (std::size_t u = 0; u < r.units.size(); ++u) {
    g.unit_arrow_[u] = static_cast<ArrowIndex>(r.unit_arrow[u]);
    g.unit_of_arrow_[g.unit_arrow_[u]] = u;
  }
  g.source_fiber_.assign(r.units.size(), {});
  g.range_fiber_.assign(r.units.size(), {});
  for (std::size_t a = 0; a < n; ++a) {
    g.source_fiber_[g.source_[a]].push_back(a);
    g.range_fiber_[g.range_[a]].push_back(a);
  }
  for (std::size_t u = 0; u < r.units.size(); ++u) g.unit_lookup_[r.units[u]] = u;
  for (std::size_t a = 0; a < n; ++a) g.arrow_lookup_[r.arrows[a]] = a;
  return g;
}

GroupoidData FiniteGroupoid::to_data() const {
  GroupoidData d;
  d.units = unit_ids_;
  for (ArrowIndex a = 0; a < arrow_count(); ++a) {
    d.arrows.push_back({arrow_ids_[a], unit_ids_[source_[a]], unit_ids_[range_[a]]});
  }
  for (ArrowIndex a = 0; a < arrow_count(); ++a) {
    for (ArrowIndex b = 0; b < arrow_count(); ++b) {
      if (composable(a, b)) d.product.push_back({arrow_ids_[a], arrow_ids_[b], arrow_ids_[compose(a, b)]});
    }
  }
  for (ArrowIndex a = 0; a < arrow_count(); ++a) d.inverse.emplace_back(arrow_ids_[a], arrow_ids_[inverse_[a]]);
  return d;
}

std::optional<UnitIndex> FiniteGroupoid::find_unit(std::string_view id) const {
  auto it = unit_lookup_.find(std::string(id));
  if (it == unit_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<ArrowIndex> FiniteGroupoid::find_arrow(std::string_view id) const {
  auto it = arrow_lookup_.find(std::string(id));
  if (it == arrow_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<ArrowIndex> FiniteGroupoid::product(ArrowIndex a, ArrowIndex b) const {
  if (!composable(a, b)) return std::nullopt;
  return compose(a, b);
}

std::vector<std::vector<UnitIndex>> FiniteGroupoid::orbits() const {
  std::vector<std::vector<UnitIndex>> out;
  std::vector<bool> seen(unit_count(), false);
  for (UnitIndex x = 0; x < unit_count(); ++x) {
    if (seen[x]) continue;
    std::vector<UnitIndex> orbit;
    for (ArrowIndex a : source_fiber_[x]) {
      if (!seen[range_[a]]) {
        seen[range_[a]] = true;
        orbit.push_back(range_[a]);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<ArrowIndex> isotropy_bundle(const FiniteGroupoid& g) {
  std::vector<ArrowIndex> out;
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    if (g.source(a) == g.range(a)) out.push_back(a);
  }
  return out;
}

bool is_principal(const FiniteGroupoid& g) {
  for (ArrowIndex a : isotropy_bundle(g)) {
    if (!g.is_unit_arrow(a)) return false;
  }
  return true;
}

bool is_essentially_principal(const FiniteGroupoid& g) { return is_principal(g); }

bool is_effective(const FiniteGroupoid& g) {
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    if (g.is_unit_arrow(a) || g.source(a) != g.range(a)) continue;
    auto single = Bisection::from_arrows(g, {a});
    auto unit = Bisection::from_arrows(g, {g.unit_arrow(g.source(a))});
    if (canonical_action(g, single) == canonical_action(g, unit)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

bool is_bisection(const FiniteGroupoid& g, const std::vector<ArrowIndex>& arrows) {
  std::vector<bool> r_used(g.unit_count(), false), s_used(g.unit_count(), false);
  for (ArrowIndex a : arrows) {
    if (a >= g.arrow_count()) return false;
    if (r_used[g.range(a)] || s_used[g.source(a)]) return false;
    r_used[g.range(a)] = true;
    s_used[g.source(a)] = true;
  }
  return true;
}

Bisection Bisection::from_arrows(const FiniteGroupoid& g, std::vector<ArrowIndex> arrows) {
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  if (!is_bisection(g, arrows)) throw Error("arrow set is not a bisection");
  Bisection b;
  b.arrows_ = std::move(arrows);
  return b;
}

Bisection Bisection::units(const FiniteGroupoid& g) {
  std::vector<ArrowIndex> arrows;
  for (UnitIndex u = 0; u < g.unit_count(); ++u) arrows.push_back(g.unit_arrow(u));
  return from_arrows(g, std::move(arrows));
}

bool Bisection::contains(ArrowIndex a) const {
  return std::binary_search(arrows_.begin(), arrows_.end(), a);
}

Bisection bisection_product(const FiniteGroupoid& g, const Bisection& s, const Bisection& t) {
  std::vector<ArrowIndex> out;
  for (ArrowIndex a : s.arrows()) {
    for (ArrowIndex b : t.arrows()) {
      if (g.composable(a, b)) out.push_back(g.compose(a, b));
    }
  }
  return Bisection::from_arrows(g, std::move(out));
}

Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& s) {
  std::vector<ArrowIndex> out;
  for (ArrowIndex a : s.arrows()) out.push_back(g.inverse(a));
  return Bisection::from_arrows(g, std::move(out));
}

PartialBijection canonical_action(const FiniteGroupoid& g, const Bisection& s) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (ArrowIndex a : s.arrows()) pairs.emplace_back(g.source(a), g.range(a));
  return PartialBijection::from_pairs(pairs);
}

std::vector<Bisection> all_bisections(const FiniteGroupoid& g, std::size_t limit) {
  std::vector<Bisection> out;
  std::vector<ArrowIndex> current;
  std::vector<bool> r_used(g.unit_count(), false), s_used(g.unit_count(), false);
  // Depth-first over arrows in index order; each arrow is taken or skipped.
  auto rec = [&](auto&& self, ArrowIndex next) -> void {
    if (next == g.arrow_count()) {
      if (out.size() >= limit) throw Error("all_bisections: more than the configured limit");
      out.push_back(Bisection::from_arrows(g, current));
      return;
    }
    self(self, next + 1);
    const auto r = g.range(next), s = g.source(next);
    if (r_used[r] || s_used[s]) return;
    r_used[r] = s_used[s] = true;
    current.push_back(next);
    self(self, next + 1);
    current.pop_back();
    r_used[r] = s_used[s] = false;
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cartan
