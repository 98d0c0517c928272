#include "cartan/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "cartan/error.hpp"

namespace cartan {

Section Section::indicator(std::size_t arrow_count, const std::vector<ArrowIndex>& arrows) {
  Section s(arrow_count);
  for (ArrowIndex a : arrows) {
    if (a >= arrow_count) throw Error("section: unknown arrow");
    s.values_[a] = 1.0;
  }
  return s;
}

Section Section::units(const FiniteGroupoid& g) {
  Section s(g.arrow_count());
  for (UnitIndex u = 0; u < g.unit_count(); ++u) s.values_[g.unit_arrow(u)] = 1.0;
  return s;
}

Section Section::diagonal(const FiniteGroupoid& g, const std::vector<Complex>& h) {
  if (h.size() != g.unit_count()) throw Error("section: diagonal has the wrong size");
  Section s(g.arrow_count());
  for (UnitIndex u = 0; u < g.unit_count(); ++u) s.values_[g.unit_arrow(u)] = h[u];
  return s;
}

std::vector<ArrowIndex> Section::support() const {
  std::vector<ArrowIndex> out;
  for (ArrowIndex a = 0; a < values_.size(); ++a) {
    if (values_[a] != Complex(0.0)) out.push_back(a);
  }
  return out;
}

Section& Section::operator+=(const Section& other) {
  if (other.size() != size()) throw Error("section: size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Section& Section::operator-=(const Section& other) {
  if (other.size() != size()) throw Error("section: size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Section& Section::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

double Section::distance(const Section& other) const {
  if (other.size() != size()) throw Error("section: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) d = std::max(d, std::abs(values_[i] - other.values_[i]));
  return d;
}

// ---------------------------------------------------------------------------

AlgebraContext::AlgebraContext(Cocycle2 cocycle) : cocycle_(std::move(cocycle)) {
  const auto check = cocycle2_check(cocycle_);
  if (!check.ok) throw Error("algebra context: cocycle fails the " + check.failure + " check");
}

AlgebraContext AlgebraContext::untwisted(std::shared_ptr<const FiniteGroupoid> g) {
  return AlgebraContext(Cocycle2::trivial(std::move(g)));
}

namespace {

void check_size(const AlgebraContext& ctx, const Section& f) {
  if (f.size() != ctx.groupoid().arrow_count()) throw Error("section does not match the groupoid");
}

}  // namespace

Section conv(const AlgebraContext& ctx, const Section& f, const Section& g) {
  check_size(ctx, f);
  check_size(ctx, g);
  const auto& G = ctx.groupoid();
  const auto& sigma = ctx.cocycle();
  Section out(G.arrow_count());
  // Sum over factorizations γ = a·τ, grouped by the right factor τ.
  for (ArrowIndex a = 0; a < G.arrow_count(); ++a) {
    if (f[a] == Complex(0.0)) continue;
    for (ArrowIndex tau : G.range_fiber(G.source(a))) {
      if (g[tau] == Complex(0.0)) continue;
      out[G.compose(a, tau)] += f[a] * g[tau] * sigma(a, tau);
    }
  }
  return out;
}

Section star(const AlgebraContext& ctx, const Section& f) {
  check_size(ctx, f);
  const auto& G = ctx.groupoid();
  Section out(G.arrow_count());
  for (ArrowIndex a = 0; a < G.arrow_count(); ++a) {
    const ArrowIndex inv = G.inverse(a);
    out[a] = std::conj(ctx.cocycle()(a, inv)) * std::conj(f[inv]);
  }
  return out;
}

ComplexMatrix regular_rep(const AlgebraContext& ctx, UnitIndex x, const Section& f) {
  check_size(ctx, f);
  const auto& G = ctx.groupoid();
  if (x >= G.unit_count()) throw Error("regular_rep: unknown unit");
  const auto& basis = G.source_fiber(x);
  const auto n = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const ArrowIndex gamma = basis[i], tau = basis[j];
      const ArrowIndex tau_inv = G.inverse(tau);
      if (!G.composable(gamma, tau_inv)) continue;
      const ArrowIndex a = G.compose(gamma, tau_inv);
      m(i, j) = f[a] * ctx.cocycle()(a, tau);
    }
  }
  return m;
}

double i_norm(const AlgebraContext& ctx, const Section& f) {
  const auto& G = ctx.groupoid();
  const Section fs = star(ctx, f);
  double best = 0.0;
  for (UnitIndex y = 0; y < G.unit_count(); ++y) {
    double a = 0.0, b = 0.0;
    for (ArrowIndex g : G.source_fiber(y)) {
      a += std::abs(f[g]);
      b += std::abs(fs[g]);
    }
    best = std::max({best, a, b});
  }
  return best;
}

double reduced_norm(const AlgebraContext& ctx, const Section& f) {
  double best = 0.0;
  for (UnitIndex x = 0; x < ctx.groupoid().unit_count(); ++x) {
    best = std::max(best, largest_singular_value(regular_rep(ctx, x, f)));
  }
  return best;
}

Section restriction_P(const AlgebraContext& ctx, const Section& f) {
  check_size(ctx, f);
  const auto& G = ctx.groupoid();
  Section out(G.arrow_count());
  for (UnitIndex u = 0; u < G.unit_count(); ++u) out[G.unit_arrow(u)] = f[G.unit_arrow(u)];
  return out;
}

bool commutes_with_diagonal(const AlgebraContext& ctx, const Section& f, double tolerance) {
  const auto& G = ctx.groupoid();
  for (UnitIndex u = 0; u < G.unit_count(); ++u) {
    const Section h = Section::indicator(G.arrow_count(), {G.unit_arrow(u)});
    if (conv(ctx, h, f).distance(conv(ctx, f, h)) > tolerance) return false;
  }
  return true;
}

bool is_masa(const AlgebraContext& ctx) {
  const auto& G = ctx.groupoid();
  const std::size_t n = G.arrow_count();
  const std::size_t u = G.unit_count();
  // Column j: the commutators [h_x, δ_j] for every unit x, stacked.
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n * u), static_cast<Eigen::Index>(n));
  for (ArrowIndex j = 0; j < n; ++j) {
    const Section d = Section::indicator(n, {j});
    for (UnitIndex x = 0; x < u; ++x) {
      const Section h = Section::indicator(n, {G.unit_arrow(x)});
      const Section c = conv(ctx, h, d) - conv(ctx, d, h);
      for (ArrowIndex i = 0; i < n; ++i) m(static_cast<Eigen::Index>(x * n + i), static_cast<Eigen::Index>(j)) = c[i];
    }
  }
  return nullity(m) == u;
}

namespace {

bool is_diagonal_section(const FiniteGroupoid& g, const Section& f, double tolerance) {
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    if (!g.is_unit_arrow(a) && std::abs(f[a]) > tolerance) return false;
  }
  return true;
}

}  // namespace

bool normalizer_membership(const AlgebraContext& ctx, const Section& n, double tolerance) {
  const auto& G = ctx.groupoid();
  const Section ns = star(ctx, n);
  for (UnitIndex u = 0; u < G.unit_count(); ++u) {
    const Section h = Section::indicator(G.arrow_count(), {G.unit_arrow(u)});
    if (!is_diagonal_section(G, conv(ctx, conv(ctx, n, h), ns), tolerance)) return false;
    if (!is_diagonal_section(G, conv(ctx, conv(ctx, ns, h), n), tolerance)) return false;
  }
  return true;
}

bool open_support_is_bisection(const AlgebraContext& ctx, const Section& n) {
  check_size(ctx, n);
  return is_bisection(ctx.groupoid(), n.support());
}

std::vector<std::pair<Bisection, Section>> bisection_decomposition(const AlgebraContext& ctx, const Section& f) {
  check_size(ctx, f);
  const auto& G = ctx.groupoid();
  std::vector<std::pair<Bisection, Section>> out;
  for (ArrowIndex a : f.support()) {
    Section piece(G.arrow_count());
    piece[a] = f[a];
    out.emplace_back(Bisection::from_arrows(G, {a}), std::move(piece));
  }
  return out;
}

bool regularity_check(const AlgebraContext& ctx) {
  const auto& G = ctx.groupoid();
  const std::size_t n = G.arrow_count();
  OrthonormalSpan span(n);
  for (ArrowIndex a = 0; a < n; ++a) {
    const Section f = Section::indicator(n, {a});
    Section sum(n);
    for (const auto& [bisection, piece] : bisection_decomposition(ctx, f)) {
      if (!is_bisection(G, piece.support())) return false;
      for (ArrowIndex b : piece.support()) {
        if (!bisection.contains(b)) return false;
      }
      sum += piece;
      span.add(Eigen::Map<const ComplexVector>(piece.values().data(), static_cast<Eigen::Index>(n)));
    }
    if (!(sum == f)) return false;
  }
  return span.size() == n;
}

std::size_t bimodular_expectation_freedom(const AlgebraContext& ctx) {
  const auto& G = ctx.groupoid();
  const std::size_t n = G.arrow_count();
  const std::size_t u = G.unit_count();
  // Unknown q[x][γ] = Q(δ_γ)(x). Each constraint below involves a single
  // unknown, so an unknown is free iff no constraint pins it.
  std::vector<std::vector<bool>> pinned(u, std::vector<bool>(n, false));
  // Q restricts to the identity on the diagonal.
  for (UnitIndex v = 0; v < u; ++v) {
    for (UnitIndex x = 0; x < u; ++x) pinned[x][G.unit_arrow(v)] = true;
  }
  // Q(h_w δ_γ) = h_w Q(δ_γ): ([r(γ)=w] - [x=w]) q[x][γ] = 0, and on the right
  // ([s(γ)=w] - [x=w]) q[x][γ] = 0.
  for (ArrowIndex gamma = 0; gamma < n; ++gamma) {
    for (UnitIndex w = 0; w < u; ++w) {
      const Section h = Section::indicator(n, {G.unit_arrow(w)});
      const Section d = Section::indicator(n, {gamma});
      const Complex left = conv(ctx, h, d)[gamma];
      const Complex right = conv(ctx, d, h)[gamma];
      for (UnitIndex x = 0; x < u; ++x) {
        const double hx = x == w ? 1.0 : 0.0;
        if (std::abs(left - hx) > 0.0 || std::abs(right - hx) > 0.0) pinned[x][gamma] = true;
      }
    }
  }
  std::size_t free = 0;
  for (const auto& row : pinned) free += static_cast<std::size_t>(std::count(row.begin(), row.end(), false));
  return free;
}

// ---------------------------------------------------------------------------

MatrixModel::MatrixModel(AlgebraContext ctx) : ctx_(std::move(ctx)) {
  const auto& G = ctx_.groupoid();
  for (const auto& orbit : G.orbits()) {
    blocks_.push_back({orbit.front(), orbit, G.source_fiber(orbit.front())});
  }
  for (ArrowIndex a = 0; a < G.arrow_count(); ++a) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& basis = blocks_[b].basis;
      for (std::size_t col = 0; col < basis.size(); ++col) {
        const ArrowIndex tau = basis[col];
        if (!G.composable(a, tau)) continue;
        const ArrowIndex gamma = G.compose(a, tau);
        const auto row = static_cast<std::size_t>(std::find(basis.begin(), basis.end(), gamma) - basis.begin());
        labels_.push_back({a, b, row, col, ctx_.cocycle()(a, tau)});
      }
    }
  }
}

std::vector<std::size_t> MatrixModel::block_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& b : blocks_) out.push_back(b.basis.size());
  return out;
}

std::vector<ComplexMatrix> MatrixModel::embed(const Section& f) const {
  std::vector<ComplexMatrix> out;
  for (const auto& b : blocks_) out.push_back(regular_rep(ctx_, b.base, f));
  return out;
}

ComplexMatrix MatrixModel::embed_block_diagonal(const Section& f) const {
  Eigen::Index total = 0;
  for (const auto& b : blocks_) total += static_cast<Eigen::Index>(b.basis.size());
  ComplexMatrix m = ComplexMatrix::Zero(total, total);
  Eigen::Index offset = 0;
  for (const auto& block : embed(f)) {
    m.block(offset, offset, block.rows(), block.cols()) = block;
    offset += block.rows();
  }
  return m;
}

double MatrixModel::norm(const Section& f) const {
  double best = 0.0;
  for (const auto& block : embed(f)) best = std::max(best, largest_singular_value(block));
  return best;
}

MatrixModel matrix_model(const AlgebraContext& ctx) { return MatrixModel(ctx); }

}  // namespace cartan
