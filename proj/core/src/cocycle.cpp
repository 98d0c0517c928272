#include "cartan/cocycle.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "cartan/error.hpp"
#include "phase_solver.hpp"

namespace cartan {
namespace {

bool near(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

Complex to_unit_modulus(Complex z, const std::string& what) {
  const double r = std::abs(z);
  if (!std::isfinite(r) || std::abs(r - 1.0) > kUnitModulusSlack) {
    throw Error(what + ": value is not of modulus one");
  }
  return z / r;
}

Cochain1 trivial_cochain(const FiniteGroupoid& g) {
  return Cochain1{std::vector<Complex>(g.arrow_count(), Complex(1.0))};
}

// ---------------------------------------------------------------------------

Cocycle2::Cocycle2(std::shared_ptr<const FiniteGroupoid> g)
    : groupoid_(std::move(g)), n_(groupoid_->arrow_count()), values_(n_ * n_, Complex(1.0)) {}

Cocycle2 Cocycle2::trivial(std::shared_ptr<const FiniteGroupoid> g) {
  if (!g) throw Error("cocycle: missing groupoid");
  return Cocycle2(std::move(g));
}

Cocycle2 Cocycle2::from_entries(std::shared_ptr<const FiniteGroupoid> g, const std::vector<Entry>& entries) {
  Cocycle2 out = trivial(std::move(g));
  for (const auto& [a, b, v] : entries) out.set(a, b, v);
  return out;
}

void Cocycle2::set(ArrowIndex a, ArrowIndex b, Complex value) {
  if (a >= n_ || b >= n_) throw Error("cocycle: unknown arrow");
  if (!groupoid_->composable(a, b)) {
    throw Error("cocycle: (" + groupoid_->arrow_id(a) + ", " + groupoid_->arrow_id(b) + ") is not composable");
  }
  values_[a * n_ + b] = to_unit_modulus(value, "cocycle");
}

Cocycle2 Cocycle2::times(const Cocycle2& other) const {
  if (!(*groupoid_ == other.groupoid())) throw Error("cocycle: groupoids differ");
  Cocycle2 out(groupoid_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = values_[i] * other.values_[i];
  return out;
}

Cocycle2 Cocycle2::conjugate() const {
  Cocycle2 out(groupoid_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] = std::conj(values_[i]);
  return out;
}

Cocycle2 Cocycle2::pullback(std::shared_ptr<const FiniteGroupoid> source, const GroupoidIsomorphism& iso) const {
  if (iso.status != GroupoidIsomorphism::Status::found || !verify_isomorphism(*source, *groupoid_, iso)) {
    throw Error("cocycle: pullback needs a verified isomorphism");
  }
  Cocycle2 out(source);
  for (ArrowIndex a = 0; a < out.n_; ++a) {
    for (ArrowIndex b = 0; b < out.n_; ++b) {
      if (source->composable(a, b)) out.values_[a * out.n_ + b] = (*this)(iso.arrow_map[a], iso.arrow_map[b]);
    }
  }
  return out;
}

double Cocycle2::distance(const Cocycle2& other) const {
  if (!(*groupoid_ == other.groupoid())) throw Error("cocycle: groupoids differ");
  double d = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - other.values_[i]));
  return d;
}

// ---------------------------------------------------------------------------

CocycleCheck cocycle2_check(const Cocycle2& sigma, double tolerance) {
  const auto& g = sigma.groupoid();
  const std::size_t n = g.arrow_count();
  for (ArrowIndex a = 0; a < n; ++a) {
    for (ArrowIndex b = 0; b < n; ++b) {
      if (!g.composable(a, b)) continue;
      if ((g.is_unit_arrow(a) || g.is_unit_arrow(b)) && !near(sigma(a, b), 1.0, tolerance)) {
        return {false, "normalization", {a, b}};
      }
    }
  }
  for (ArrowIndex a = 0; a < n; ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      const ArrowIndex ab = g.compose(a, b);
      for (ArrowIndex c : g.range_fiber(g.source(b))) {
        const Complex lhs = sigma(a, b) * sigma(ab, c);
        const Complex rhs = sigma(b, c) * sigma(a, g.compose(b, c));
        if (!near(lhs, rhs, tolerance)) return {false, "identity", {a, b, c}};
      }
    }
  }
  return {};
}

Cocycle2 coboundary(const Cochain1& c, std::shared_ptr<const FiniteGroupoid> g) {
  if (c.values.size() != g->arrow_count()) throw Error("coboundary: cochain has the wrong size");
  std::vector<Complex> cv(c.values.size());
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] = to_unit_modulus(c.values[i], "cochain");
  Cocycle2 out = Cocycle2::trivial(g);
  for (ArrowIndex a = 0; a < g->arrow_count(); ++a) {
    for (ArrowIndex b : g->range_fiber(g->source(a))) {
      out.set(a, b, cv[a] * cv[b] / cv[g->compose(a, b)]);
    }
  }
  return out;
}

std::optional<Cochain1> is_coboundary(const Cocycle2& sigma, double tolerance) {
  const auto check = cocycle2_check(sigma, tolerance);
  if (!check.ok) throw Error("is_coboundary: input fails the " + check.failure + " check");
  const auto& g = sigma.groupoid();
  const std::size_t n = g.arrow_count();
  std::vector<Complex> c(n, Complex(1.0));

  for (const auto& orbit : g.orbits()) {
    const UnitIndex base = orbit.front();
    // tree[z]: an arrow from base to z with c = 1, found breadth-first.
    std::vector<std::optional<ArrowIndex>> tree(g.unit_count());
    tree[base] = g.unit_arrow(base);
    std::deque<UnitIndex> queue{base};
    while (!queue.empty()) {
      const UnitIndex y = queue.front();
      queue.pop_front();
      for (ArrowIndex a : g.source_fiber(y)) {
        const UnitIndex z = g.range(a);
        if (tree[z]) continue;
        tree[z] = g.compose(a, *tree[y]);
        queue.push_back(z);
      }
    }

    // Isotropy group K at the base: θ_a + θ_b - θ_ab ≡ arg σ(a,b) / 2π.
    std::vector<ArrowIndex> group;
    for (ArrowIndex a : g.source_fiber(base)) {
      if (g.range(a) == base) group.push_back(a);
    }
    std::vector<std::size_t> slot(n, 0);
    for (std::size_t i = 0; i < group.size(); ++i) slot[group[i]] = i;
    std::vector<std::vector<long long>> m;
    std::vector<double> phi;
    std::vector<long long> unit_row(group.size(), 0);
    unit_row[slot[g.unit_arrow(base)]] = 1;
    m.push_back(unit_row);
    phi.push_back(0.0);
    for (ArrowIndex a : group) {
      for (ArrowIndex b : group) {
        std::vector<long long> row(group.size(), 0);
        row[slot[a]] += 1;
        row[slot[b]] += 1;
        row[slot[g.compose(a, b)]] -= 1;
        m.push_back(std::move(row));
        phi.push_back(std::arg(sigma(a, b)) / (2.0 * std::numbers::pi));
      }
    }
    auto theta = detail::solve_mod_one(std::move(m), std::move(phi), 1e-9);
    if (!theta) return std::nullopt;
    for (std::size_t i = 0; i < group.size(); ++i) {
      c[group[i]] = std::polar(1.0, 2.0 * std::numbers::pi * (*theta)[i]);
    }

    // γ = t_z · h · t_y⁻¹ with h in K and c(t_z) = 1.
    for (UnitIndex y : orbit) {
      const ArrowIndex ty = *tree[y];
      const ArrowIndex ty_inv = g.inverse(ty);
      const Complex c_ty_inv = sigma(ty, ty_inv);
      for (ArrowIndex gamma : g.source_fiber(y)) {
        const ArrowIndex tz = *tree[g.range(gamma)];
        const ArrowIndex h = g.compose(g.compose(g.inverse(tz), gamma), ty);
        const ArrowIndex tz_h = g.compose(tz, h);
        const Complex c_tz_h = c[h] / sigma(tz, h);
        c[gamma] = c_tz_h * c_ty_inv / sigma(tz_h, ty_inv);
      }
    }
  }

  Cochain1 witness{std::move(c)};
  for (ArrowIndex a = 0; a < n; ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      const Complex lhs = witness(a) * witness(b) / witness(g.compose(a, b));
      if (!near(lhs, sigma(a, b), tolerance)) return std::nullopt;
    }
  }
  return witness;
}

std::optional<Cochain1> cocycles_cohomologous(const Cocycle2& s1, const Cocycle2& s2, double tolerance) {
  if (!(s1.groupoid() == s2.groupoid())) throw Error("cocycles_cohomologous: groupoids differ");
  return is_coboundary(s1.times(s2.conjugate()), tolerance);
}

// ---------------------------------------------------------------------------

FMCocycle::FMCocycle(std::shared_ptr<const FiniteGroupoid> relation,
                     const std::vector<std::tuple<UnitIndex, UnitIndex, UnitIndex, Complex>>& entries)
    : relation_(std::move(relation)) {
  if (!relation_ || !is_principal(*relation_)) throw Error("FM cocycle: the groupoid is not a relation");
  u_ = relation_->unit_count();
  values_.assign(u_ * u_ * u_, std::nullopt);
  for (const auto& [x, y, z, v] : entries) set(x, y, z, v);
}

FMCocycle FMCocycle::trivial(std::shared_ptr<const FiniteGroupoid> relation) {
  FMCocycle out(std::move(relation), {});
  const std::size_t u = out.u_;
  for (UnitIndex x = 0; x < u; ++x) {
    for (UnitIndex y = 0; y < u; ++y) {
      for (UnitIndex z = 0; z < u; ++z) {
        if (out.related(x, y) && out.related(y, z)) out.set(x, y, z, 1.0);
      }
    }
  }
  return out;
}

bool FMCocycle::related(UnitIndex x, UnitIndex y) const {
  for (ArrowIndex a : relation_->source_fiber(y)) {
    if (relation_->range(a) == x) return true;
  }
  return false;
}

std::optional<Complex> FMCocycle::value(UnitIndex x, UnitIndex y, UnitIndex z) const {
  if (x >= u_ || y >= u_ || z >= u_) return std::nullopt;
  return values_[index(x, y, z)];
}

void FMCocycle::set(UnitIndex x, UnitIndex y, UnitIndex z, Complex value) {
  if (x >= u_ || y >= u_ || z >= u_) throw Error("FM cocycle: unknown unit");
  if (!related(x, y) || !related(y, z)) throw Error("FM cocycle: triple is not inside one class");
  values_[index(x, y, z)] = to_unit_modulus(value, "FM cocycle");
}

FMCheck fm_cocycle_check(const FMCocycle& sigma, double tolerance) {
  const auto& r = sigma.relation();
  auto get = [&](UnitIndex x, UnitIndex y, UnitIndex z) {
    auto v = sigma.value(x, y, z);
    if (!v) {
      throw Error("FM cocycle: value missing for (" + r.unit_id(x) + ", " + r.unit_id(y) + ", " +
                  r.unit_id(z) + ")");
    }
    return *v;
  };
  for (const auto& orbit : r.orbits()) {
    for (UnitIndex x : orbit) {
      for (UnitIndex y : orbit) {
        for (UnitIndex z : orbit) get(x, y, z);
      }
    }
  }
  for (const auto& orbit : r.orbits()) {
    for (UnitIndex x : orbit) {
      for (UnitIndex y : orbit) {
        for (UnitIndex z : orbit) {
          for (UnitIndex t : orbit) {
            const Complex lhs = get(x, y, z) * get(x, z, t);
            const Complex rhs = get(x, y, t) * get(y, z, t);
            if (!near(lhs, rhs, tolerance)) return {false, std::array<UnitIndex, 4>{x, y, z, t}};
          }
        }
      }
    }
  }
  return {};
}

namespace {

// The relation arrow from y to x.
ArrowIndex relation_arrow(const FiniteGroupoid& r, UnitIndex x, UnitIndex y) {
  for (ArrowIndex a : r.source_fiber(y)) {
    if (r.range(a) == x) return a;
  }
  throw Error("FM cocycle: units are not related");
}

}  // namespace

FMCocycle fm_coboundary(const Cochain1& c, std::shared_ptr<const FiniteGroupoid> relation) {
  if (c.values.size() != relation->arrow_count()) throw Error("fm_coboundary: cochain has the wrong size");
  FMCocycle out(relation, {});
  const auto& r = *relation;
  for (const auto& orbit : r.orbits()) {
    for (UnitIndex x : orbit) {
      for (UnitIndex y : orbit) {
        for (UnitIndex z : orbit) {
          const Complex v = c(relation_arrow(r, x, y)) * c(relation_arrow(r, y, z)) / c(relation_arrow(r, x, z));
          out.set(x, y, z, v);
        }
      }
    }
  }
  return out;
}

Cocycle2 fm_to_groupoid(const FMCocycle& sigma) {
  const auto& r = sigma.relation();
  auto value = [&](UnitIndex x, UnitIndex y, UnitIndex z) {
    auto v = sigma.value(x, y, z);
    if (!v) throw Error("FM cocycle: value missing for (" + r.unit_id(x) + ", " + r.unit_id(y) + ", " + r.unit_id(z) + ")");
    return *v;
  };
  // c(u) = conj σ(u,u,u) on unit arrows, 1 elsewhere.
  std::vector<Complex> c(r.arrow_count(), Complex(1.0));
  for (UnitIndex u = 0; u < r.unit_count(); ++u) c[r.unit_arrow(u)] = std::conj(value(u, u, u));
  Cocycle2 out = Cocycle2::trivial(sigma.relation_ptr());
  for (ArrowIndex a = 0; a < r.arrow_count(); ++a) {
    for (ArrowIndex b : r.range_fiber(r.source(a))) {
      const Complex raw = value(r.range(a), r.source(a), r.source(b));
      out.set(a, b, raw * c[a] * c[b] / c[r.compose(a, b)]);
    }
  }
  return out;
}

}  // namespace cartan
