#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cartan {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct PowerIterationOptions {
  double tolerance = 1e-12;  // relative to max(1, estimate)
  int max_iterations = 10000;
  unsigned seed = 0x5eed;
};

/// Largest singular value of a. Blocks with at most three columns use the
/// closed-form eigenvalues of the Gram matrix; larger ones run power
/// iteration on a*a from a fixed pseudo-random start vector.
double largest_singular_value(const ComplexMatrix& a, const PowerIterationOptions& options = {});

/// Largest eigenvalue of a Hermitian positive semidefinite matrix of size at
/// most three, from its characteristic polynomial.
double largest_eigenvalue_psd_small(const ComplexMatrix& h);

/// Orthonormal basis of a growing subspace of C^n (Gram–Schmidt with one
/// round of re-orthogonalization).
class OrthonormalSpan {
 public:
  explicit OrthonormalSpan(std::size_t dimension, double tolerance = 1e-10)
      : dimension_(dimension), tolerance_(tolerance) {}

  /// Adds v if it is not already in the span; returns whether it was added.
  bool add(const ComplexVector& v);
  /// Distance from v to the span.
  double residual(const ComplexVector& v) const;
  bool contains(const ComplexVector& v) const { return residual(v) <= tolerance_ * std::max(1.0, v.norm()); }

  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<ComplexVector>& basis() const noexcept { return basis_; }

 private:
  ComplexVector project_out(ComplexVector v) const;

  std::size_t dimension_;
  double tolerance_;
  std::vector<ComplexVector> basis_;
};

/// Dimension of the null space of m, singular values below `tolerance`
/// (relative to the largest) counted as zero.
std::size_t nullity(const ComplexMatrix& m, double tolerance = 1e-9);

/// Columns of m stacked into one vector.
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace cartan
