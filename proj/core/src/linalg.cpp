#include "cartan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cartan/error.hpp"

namespace cartan {

double largest_eigenvalue_psd_small(const ComplexMatrix& h) {
  const auto n = h.rows();
  if (n != h.cols() || n > 3) throw Error("largest_eigenvalue_psd_small: expected a square matrix of size <= 3");
  if (n == 0) return 0.0;
  if (n == 1) return std::max(0.0, h(0, 0).real());
  if (n == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const double off = std::norm(h(0, 1));
    const double half_gap = 0.5 * (a - d);
    return std::max(0.0, 0.5 * (a + d) + std::sqrt(half_gap * half_gap + off));
  }
  const double p1 = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  const double q = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
  const double d0 = h(0, 0).real() - q, d1 = h(1, 1).real() - q, d2 = h(2, 2).real() - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  if (p2 == 0.0) return std::max(0.0, q);
  const double p = std::sqrt(p2 / 6.0);
  ComplexMatrix b = (h - q * ComplexMatrix::Identity(3, 3)) / p;
  const double r = std::clamp(0.5 * b.determinant().real(), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return std::max(0.0, q + 2.0 * p * std::cos(phi));
}

double largest_singular_value(const ComplexMatrix& a, const PowerIterationOptions& options) {
  if (a.size() == 0) return 0.0;
  const ComplexMatrix gram = a.adjoint() * a;
  const auto n = gram.rows();
  if (n <= 3) return std::sqrt(largest_eigenvalue_psd_small(gram));

  std::mt19937 rng(options.seed);
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {normal(rng), normal(rng)};
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    ComplexVector w = gram * v;
    const double next = std::max(0.0, v.dot(w).real());
    const double scale = std::max(1.0, next);
    const double residual = (w - next * v).norm();
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    const bool settled = std::abs(next - lambda) < options.tolerance * scale && residual < options.tolerance * scale;
    lambda = next;
    if (settled) return std::sqrt(lambda);
    v = w / wn;
  }
  // Clustered top eigenvalues stall the residual; use a direct solver instead.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

// ---------------------------------------------------------------------------

ComplexVector OrthonormalSpan::project_out(ComplexVector v) const {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis_) v -= q * q.dot(v);
  }
  return v;
}

bool OrthonormalSpan::add(const ComplexVector& v) {
  if (static_cast<std::size_t>(v.size()) != dimension_) throw Error("OrthonormalSpan: dimension mismatch");
  const double scale = std::max(1.0, v.norm());
  ComplexVector r = project_out(v);
  const double rn = r.norm();
  if (rn <= tolerance_ * scale) return false;
  basis_.push_back(r / rn);
  return true;
}

double OrthonormalSpan::residual(const ComplexVector& v) const { return project_out(v).norm(); }

std::size_t nullity(const ComplexMatrix& m, double tolerance) {
  if (m.cols() == 0) return 0;
  if (m.rows() == 0) return static_cast<std::size_t>(m.cols());
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double cut = tolerance * std::max(1.0, s.size() ? s(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return static_cast<std::size_t>(m.cols()) - rank;
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace cartan
