#include "cartan/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cartan/error.hpp"

namespace cartan {
namespace {

Complex frobenius(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace(); }

}  // namespace

bool masa_check(const CartanPairModel& pair) {
  const auto& basis = pair.basis();
  const auto n = static_cast<Eigen::Index>(pair.dimension());
  const auto x_count = static_cast<Eigen::Index>(pair.spectrum_size());
  ComplexMatrix m(n * n * x_count, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (Eigen::Index x = 0; x < x_count; ++x) {
      const ComplexMatrix p = pair.projection(static_cast<std::size_t>(x));
      const ComplexMatrix c = p * basis[i] - basis[i] * p;
      m.block(x * n * n, static_cast<Eigen::Index>(i), n * n, 1) = vectorize(c);
    }
  }
  return nullity(m) == pair.spectrum_size();
}

bool is_normalizer(const CartanPairModel& pair, const ComplexMatrix& n, double tolerance) {
  const auto dim = static_cast<Eigen::Index>(pair.dimension());
  if (n.rows() != dim || n.cols() != dim || !pair.contains(n)) return false;
  const double tol = tolerance * std::max(1.0, n.squaredNorm());
  for (std::size_t x = 0; x < pair.spectrum_size(); ++x) {
    const ComplexMatrix p = pair.projection(x);
    if (!pair.diagonal_coefficients(n * p * n.adjoint(), tol)) return false;
    if (!pair.diagonal_coefficients(n.adjoint() * p * n, tol)) return false;
  }
  return true;
}

std::vector<GeneratingNormalizer> find_normalizers(const CartanPairModel& pair) {
  if (!masa_check(pair)) throw Error("find_normalizers: the diagonal is not maximal abelian");
  std::vector<GeneratingNormalizer> out;
  for (std::size_t x = 0; x < pair.spectrum_size(); ++x) {
    const ComplexMatrix px = pair.projection(x);
    for (std::size_t y = 0; y < pair.spectrum_size(); ++y) {
      const ComplexMatrix py = pair.projection(y);
      std::optional<ComplexMatrix> v;
      for (const auto& b : pair.basis()) {
        ComplexMatrix c = px * b * py;
        if (c.norm() > 1e-9) {
          v = std::move(c);
          break;
        }
      }
      if (!v) continue;
      // v* v = c p_y because p_y is minimal.
      const double c = (v->adjoint() * *v).trace().real() / static_cast<double>(pair.projections()[y].size());
      ComplexMatrix m = *v / std::sqrt(c);
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        bool done = false;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          if (std::abs(m(i, j)) > 1e-12) {
            m *= std::conj(m(i, j)) / std::abs(m(i, j));
            m(i, j) = std::abs(m(i, j));
            done = true;
            break;
          }
        }
        if (done) break;
      }
      out.push_back({x, y, std::move(m)});
    }
  }
  return out;
}

PartialBijection alpha_of(const CartanPairModel& pair, const ComplexMatrix& n, double tolerance) {
  if (!is_normalizer(pair, n, tolerance)) throw Error("alpha_of: not a normalizer");
  const double tol = tolerance * std::max(1.0, n.squaredNorm());
  const auto d = pair.diagonal_coefficients(n.adjoint() * n, tol);
  std::vector<std::vector<Complex>> image_weight;  // image_weight[y][x] = (n* p_y n)(x)
  for (std::size_t y = 0; y < pair.spectrum_size(); ++y) {
    image_weight.push_back(*pair.diagonal_coefficients(n.adjoint() * pair.projection(y) * n, tol));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < pair.spectrum_size(); ++x) {
    if ((*d)[x].real() <= tol) continue;
    std::optional<std::size_t> target;
    for (std::size_t y = 0; y < pair.spectrum_size(); ++y) {
      const Complex w = image_weight[y][x];
      if (std::abs(w - (*d)[x]) <= tol) {
        if (target) throw Error("alpha_of: inconsistent identity");
        target = y;
      } else if (std::abs(w) > tol) {
        throw Error("alpha_of: inconsistent identity");
      }
    }
    if (!target) throw Error("alpha_of: inconsistent identity");
    pairs.emplace_back(x, *target);
  }
  return PartialBijection::from_pairs(pairs);
}

std::vector<PartialBijection> weyl_pseudogroup(const CartanPairModel& pair) {
  std::set<PartialBijection> seen;
  std::vector<PartialBijection> frontier;
  auto push = [&](PartialBijection p) {
    if (seen.insert(p).second) frontier.push_back(std::move(p));
  };
  std::vector<PartialBijection> gens;
  for (const auto& n : find_normalizers(pair)) {
    gens.push_back(alpha_of(pair, n.matrix));
    gens.push_back(gens.back().inverse());
  }
  for (const auto& g : gens) push(g);
  while (!frontier.empty()) {
    auto next = std::move(frontier);
    frontier.clear();
    for (const auto& p : next) {
      push(p.inverse());
      for (const auto& g : gens) {
        push(g.compose(p));
        push(p.compose(g));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::string> spectrum_labels(const CartanPairModel& pair) {
  const std::size_t count = pair.spectrum_size();
  std::size_t width = 1;
  for (std::size_t k = 10; k < count; k *= 10) ++width;
  std::vector<std::string> out;
  for (std::size_t x = 0; x < count; ++x) {
    std::string digits = std::to_string(x);
    out.push_back("x" + std::string(width - digits.size(), '0') + digits);
  }
  return out;
}

WeylGroupoid weyl_groupoid(const CartanPairModel& pair) {
  const auto labels = spectrum_labels(pair);
  const auto gens = find_normalizers(pair);
  std::vector<std::pair<std::string, std::string>> related;
  for (const auto& n : gens) {
    const auto alpha = alpha_of(pair, n.matrix);
    for (const auto& [y, x] : alpha.pairs()) related.emplace_back(labels[x], labels[y]);
  }
  WeylGroupoid out;
  out.groupoid = std::make_shared<const FiniteGroupoid>(relation_groupoid(labels, related));
  const auto& g = *out.groupoid;
  out.unit_of_point.resize(labels.size());
  out.point_of_unit.resize(labels.size());
  for (std::size_t x = 0; x < labels.size(); ++x) {
    out.unit_of_point[x] = *g.find_unit(labels[x]);
    out.point_of_unit[out.unit_of_point[x]] = x;
  }
  std::map<std::pair<std::size_t, std::size_t>, const ComplexMatrix*> by_pair;
  for (const auto& n : gens) by_pair[{n.range, n.source}] = &n.matrix;
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    auto it = by_pair.find({out.point_of_unit[g.range(a)], out.point_of_unit[g.source(a)]});
    if (it == by_pair.end()) throw Error("weyl_groupoid: arrow without a generating normalizer");
    out.witness.push_back(*it->second);
  }
  return out;
}

namespace {

// Phase of λ where m p_z = λ w p_z.
Complex relative_phase(const CartanPairModel& pair, const ComplexMatrix& m, const ComplexMatrix& w, std::size_t z) {
  const ComplexMatrix pz = pair.projection(z);
  const ComplexMatrix wz = w * pz;
  const Complex lambda = frobenius(wz, m * pz) / frobenius(wz, wz);
  if (std::abs(lambda) == 0.0) throw Error("weyl twist: representative vanishes at the source point");
  return lambda / std::abs(lambda);
}

}  // namespace

Cocycle2 weyl_twist(const CartanPairModel& pair, const WeylGroupoid& weyl,
                    const std::vector<ComplexMatrix>& section_choice) {
  const auto& g = *weyl.groupoid;
  const auto& n = section_choice.empty() ? weyl.witness : section_choice;
  if (n.size() != g.arrow_count()) throw Error("weyl_twist: section choice must cover every arrow");
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    const std::size_t x = weyl.point_of_unit[g.range(a)];
    const std::size_t y = weyl.point_of_unit[g.source(a)];
    const auto alpha = alpha_of(pair, n[a]);
    if (alpha(y) != x) throw Error("weyl_twist: section choice for " + g.arrow_id(a) + " does not realize the arrow");
    if (g.is_unit_arrow(a)) {
      const auto b = pair.diagonal_coefficients(n[a]);
      if (!b || std::abs((*b)[x].imag()) > 1e-12 || (*b)[x].real() <= 0.0) {
        throw Error("weyl_twist: unit arrow " + g.arrow_id(a) + " needs a positive diagonal representative");
      }
    }
  }
  Cocycle2 sigma = Cocycle2::trivial(weyl.groupoid);
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      const std::size_t z = weyl.point_of_unit[g.source(b)];
      sigma.set(a, b, relative_phase(pair, n[a] * n[b], n[g.compose(a, b)], z));
    }
  }
  return sigma;
}

TwistClass twist_class(const CartanPairModel& pair, const WeylGroupoid& weyl, const ComplexMatrix& n, std::size_t y) {
  const auto x = alpha_of(pair, n)(y);
  if (!x) throw Error("twist_class: point outside the domain of the normalizer");
  const auto& g = *weyl.groupoid;
  for (ArrowIndex a : g.source_fiber(weyl.unit_of_point[y])) {
    if (weyl.point_of_unit[g.range(a)] == *x) return {a, relative_phase(pair, n, weyl.witness[a], y)};
  }
  throw Error("twist_class: no arrow for the germ");
}

bool kernel_commutant_check(const CartanPairModel& pair, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto check = [&](const ComplexMatrix& n) {
    if (!alpha_of(pair, n).is_identity_on_domain()) return true;
    return pair.diagonal_coefficients(n).has_value();
  };
  for (const auto& gen : find_normalizers(pair)) {
    if (!check(gen.matrix)) return false;
    for (int k = 0; k < 4; ++k) {
      std::vector<Complex> b(pair.spectrum_size());
      for (auto& v : b) v = {normal(rng), normal(rng)};
      const ComplexMatrix d = pair.from_diagonal(b);
      if (!check(d * gen.matrix) || !check(gen.matrix * d)) return false;
    }
  }
  return true;
}

Section evaluation(const CartanPairModel& pair, const WeylGroupoid& weyl, const ComplexMatrix& a) {
  if (!pair.contains(a)) throw Error("evaluation: element outside the algebra");
  const auto& g = *weyl.groupoid;
  Section out(g.arrow_count());
  for (ArrowIndex gamma = 0; gamma < g.arrow_count(); ++gamma) {
    const auto& n = weyl.witness[gamma];
    const std::size_t y = weyl.point_of_unit[g.source(gamma)];
    const Complex top = pair.expectation_values(n.adjoint() * a)[y];
    const double bottom = pair.expectation_values(n.adjoint() * n)[y].real();
    out[gamma] = top / std::sqrt(bottom);
  }
  return out;
}

double transition_probability(const CartanPairModel& pair, const ComplexMatrix& n, std::size_t x) {
  const double d = pair.expectation_values(n.adjoint() * n).at(x).real();
  if (d <= 0.0) throw Error("transition_probability: point outside the domain");
  return std::norm(pair.expectation_values(n).at(x)) / d;
}

UniqueExtensionReport unique_extension_analysis(const CartanPairModel& pair) {
  UniqueExtensionReport report;
  const auto weyl = weyl_groupoid(pair);
  report.is_principal_weyl = is_principal(*weyl.groupoid);

  const auto& basis = pair.basis();
  const std::size_t dim = basis.size();

  // dim ker(P|A) from the matrix of P on the basis.
  ComplexMatrix pm(static_cast<Eigen::Index>(pair.spectrum_size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const auto v = pair.expectation_values(basis[i]);
    for (std::size_t x = 0; x < v.size(); ++x) pm(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i)) = v[x];
  }
  const std::size_t ker_dim = nullity(pm);

  OrthonormalSpan free_span(pair.dimension() * pair.dimension());
  bool inside_kernel = true;
  for (const auto& gen : find_normalizers(pair)) {
    if ((gen.matrix * gen.matrix).norm() > 1e-12) continue;
    for (const auto& v : pair.expectation_values(gen.matrix)) {
      if (std::abs(v) > 1e-12) inside_kernel = false;
    }
    free_span.add(vectorize(gen.matrix));
  }
  report.free_normalizer_span_equals_ker_P = inside_kernel && free_span.size() == ker_dim;

  OrthonormalSpan decomposition(pair.dimension() * pair.dimension());
  for (std::size_t x = 0; x < pair.spectrum_size(); ++x) decomposition.add(vectorize(pair.projection(x)));
  for (const auto& b : basis) {
    for (std::size_t x = 0; x < pair.spectrum_size(); ++x) {
      const ComplexMatrix p = pair.projection(x);
      decomposition.add(vectorize(ComplexMatrix(b * p - p * b)));
    }
  }
  report.commutator_decomposition = decomposition.size() == dim;
  return report;
}

bool separation_check(const CartanPairModel& pair, const std::vector<ComplexMatrix>& normalizers) {
  for (const auto& n : normalizers) {
    const auto alpha = alpha_of(pair, n);
    const auto p = pair.expectation_values(n);
    for (const auto& [x, y] : alpha.pairs()) {
      if (x != y && p[x] != Complex(0.0)) return false;
    }
  }
  return true;
}

bool separation_check(const CartanPairModel& pair) {
  std::vector<ComplexMatrix> ns;
  for (const auto& gen : find_normalizers(pair)) ns.push_back(gen.matrix);
  return separation_check(pair, ns);
}

// ---------------------------------------------------------------------------

CartanPairModel cartan_pair_of(const MatrixModel& model) {
  const auto sizes = model.block_sizes();
  std::size_t total = 0;
  for (auto s : sizes) total += s;
  std::vector<ComplexMatrix> generators;
  const auto& g = model.context().groupoid();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    generators.push_back(model.embed_block_diagonal(Section::indicator(g.arrow_count(), {a})));
  }
  return CartanPairModel(sizes, CartanPairModel::standard_projections(total), generators);
}

RoundtripReport roundtrip_check(const Cocycle2& s, std::size_t samples, std::uint64_t seed, std::size_t max_units) {
  const auto g = s.groupoid_ptr();
  if (!is_principal(*g)) throw Error("roundtrip: the groupoid is not principal");
  if (g->unit_count() > max_units) throw Error("roundtrip: isomorphism search bound exceeded");

  RoundtripReport report;
  const AlgebraContext ctx(s);
  const MatrixModel model(ctx);
  const CartanPairModel pair = cartan_pair_of(model);
  const WeylGroupoid weyl = weyl_groupoid(pair);
  report.isomorphism = find_isomorphism(*g, *weyl.groupoid, max_units);
  if (report.isomorphism.status != GroupoidIsomorphism::Status::found) return report;

  const Cocycle2 twist = weyl_twist(pair, weyl);
  const Cocycle2 ratio = s.times(twist.pullback(g, report.isomorphism).conjugate());
  report.cocycle_witness = is_coboundary(ratio);
  if (report.cocycle_witness) report.cocycle_residual = coboundary(*report.cocycle_witness, g).distance(ratio);

  const AlgebraContext wctx(twist);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_element = [&] {
    const auto n = static_cast<Eigen::Index>(pair.dimension());
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (const auto& b : pair.basis()) a += Complex(normal(rng), normal(rng)) * b;
    return a;
  };
  double residual = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const ComplexMatrix a = random_element();
    const ComplexMatrix b = random_element();
    const Section pa = evaluation(pair, weyl, a);
    const Section pb = evaluation(pair, weyl, b);
    residual = std::max(residual, evaluation(pair, weyl, a * b).distance(conv(wctx, pa, pb)));
    residual = std::max(residual, evaluation(pair, weyl, a.adjoint()).distance(star(wctx, pa)));
  }
  report.star_isomorphism_residual = residual;

  report.diagonal_preserved = true;
  for (std::size_t x = 0; x < pair.spectrum_size(); ++x) {
    const Section expected = Section::indicator(weyl.groupoid->arrow_count(),
                                                {weyl.groupoid->unit_arrow(weyl.unit_of_point[x])});
    if (evaluation(pair, weyl, pair.projection(x)).distance(expected) > 1e-12) report.diagonal_preserved = false;
  }

  // Ψ(embed(δ_γ)) = κ(γ) δ_{φ(γ)} with κ(a) κ(b) / κ(ab) = ratio(a, b).
  std::vector<Complex> kappa(g->arrow_count());
  double embed_residual = 0.0;
  for (ArrowIndex a = 0; a < g->arrow_count(); ++a) {
    const Section psi = evaluation(pair, weyl, model.embed_block_diagonal(Section::indicator(g->arrow_count(), {a})));
    const ArrowIndex image = report.isomorphism.arrow_map[a];
    kappa[a] = psi[image];
    Section expected(weyl.groupoid->arrow_count());
    expected[image] = kappa[a];
    embed_residual = std::max({embed_residual, psi.distance(expected), std::abs(std::abs(kappa[a]) - 1.0)});
  }
  for (ArrowIndex a = 0; a < g->arrow_count(); ++a) {
    for (ArrowIndex b : g->range_fiber(g->source(a))) {
      const Complex lhs = kappa[a] * kappa[b] / kappa[g->compose(a, b)];
      embed_residual = std::max(embed_residual, std::abs(lhs - ratio(a, b)));
    }
  }
  report.embedding_residual = embed_residual;

  report.ok = report.cocycle_witness.has_value() && report.cocycle_residual <= 1e-12 &&
              report.star_isomorphism_residual <= 1e-8 && report.embedding_residual <= 1e-10 &&
              report.diagonal_preserved;
  return report;
}

}  // namespace cartan
