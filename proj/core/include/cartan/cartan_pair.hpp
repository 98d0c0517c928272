#pragma once

// A finite-dimensional C*-algebra A ⊆ ⊕ M_{n_k} with a distinguished
// diagonal subalgebra B spanned by orthogonal diagonal 0/1 projections.

#include <cstddef>
#include <optional>
#include <vector>

#include "cartan/linalg.hpp"

namespace cartan {

class CartanPairModel {
 public:
  /// `projections` lists, for each minimal projection of B, the global
  /// diagonal positions where it is 1; they must partition 0..N-1 with
  /// N = Σ block_sizes. `generators` are N×N block-diagonal matrices; A is
  /// the *-algebra they generate together with B. With no generators A is
  /// the full block algebra. Throws cartan::Error on invalid input.
  CartanPairModel(std::vector<std::size_t> block_sizes, std::vector<std::vector<std::size_t>> projections,
                  const std::vector<ComplexMatrix>& generators);

  /// ⊕ M_{n_k} with B the full diagonal (one projection per position).
  static CartanPairModel full(std::vector<std::size_t> block_sizes);
  /// Standard diagonal: one projection per diagonal position.
  static std::vector<std::vector<std::size_t>> standard_projections(std::size_t dimension);
  /// One projection per block: the block identity.
  static std::vector<std::vector<std::size_t>> block_scalar_projections(const std::vector<std::size_t>& block_sizes);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<std::size_t>& block_sizes() const noexcept { return block_sizes_; }
  std::size_t block_offset(std::size_t block) const { return offsets_.at(block); }
  std::size_t block_of(std::size_t position) const;

  /// Spectrum of B: one point per minimal projection.
  std::size_t spectrum_size() const noexcept { return projections_.size(); }
  const std::vector<std::vector<std::size_t>>& projections() const noexcept { return projections_; }
  ComplexMatrix projection(std::size_t x) const;
  /// Minimal projection containing a diagonal position.
  std::size_t point_of(std::size_t position) const { return point_of_[position]; }

  /// Orthonormal (Frobenius) basis of A.
  const std::vector<ComplexMatrix>& basis() const noexcept { return basis_; }
  std::size_t algebra_dimension() const noexcept { return basis_.size(); }

  bool contains(const ComplexMatrix& m, double tolerance = 1e-9) const;

  /// Coefficients b(x) if m = Σ b(x) p_x lies in B.
  std::optional<std::vector<Complex>> diagonal_coefficients(const ComplexMatrix& m, double tolerance = 1e-9) const;
  ComplexMatrix from_diagonal(const std::vector<Complex>& b) const;

  /// P(m)(x) = tr(p_x m) / tr(p_x).
  std::vector<Complex> expectation_values(const ComplexMatrix& m) const;
  ComplexMatrix expectation(const ComplexMatrix& m) const { return from_diagonal(expectation_values(m)); }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::size_t> block_sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<std::size_t>> projections_;
  std::vector<std::size_t> point_of_;
  std::vector<ComplexMatrix> basis_;
  OrthonormalSpan span_{0};
};

}  // namespace cartan
