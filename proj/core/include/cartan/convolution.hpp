#pragma once

// Twisted convolution algebra of a finite groupoid and its regular
// representations.
//
//   (f*g)(γ)  = Σ_{s(τ)=s(γ)} f(γτ⁻¹) g(τ) σ(γτ⁻¹, τ)
//   f^*(γ)    = conj σ(γ, γ⁻¹) · conj f(γ⁻¹)
//   π_x(f)    = [ f(γτ⁻¹) σ(γτ⁻¹, τ) ]_{γ,τ ∈ G_x}

#include <memory>
#include <utility>
#include <vector>

#include "cartan/cocycle.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/linalg.hpp"

namespace cartan {

class Section {
 public:
  Section() = default;
  explicit Section(std::size_t arrow_count) : values_(arrow_count, Complex(0.0)) {}
  explicit Section(std::vector<Complex> values) : values_(std::move(values)) {}

  static Section indicator(std::size_t arrow_count, const std::vector<ArrowIndex>& arrows);
  /// Indicator of the unit arrows.
  static Section units(const FiniteGroupoid& g);
  /// Diagonal section with value h[u] on the unit arrow of u.
  static Section diagonal(const FiniteGroupoid& g, const std::vector<Complex>& h);

  std::size_t size() const noexcept { return values_.size(); }
  Complex& operator[](ArrowIndex a) { return values_[a]; }
  Complex operator[](ArrowIndex a) const { return values_[a]; }
  const std::vector<Complex>& values() const noexcept { return values_; }

  /// {γ : f(γ) ≠ 0}.
  std::vector<ArrowIndex> support() const;

  Section& operator+=(const Section& other);
  Section& operator-=(const Section& other);
  Section& operator*=(Complex c);
  friend Section operator+(Section a, const Section& b) { return a += b; }
  friend Section operator-(Section a, const Section& b) { return a -= b; }
  friend Section operator*(Complex c, Section a) { return a *= c; }

  /// max_γ |f(γ) - g(γ)|.
  double distance(const Section& other) const;

  friend bool operator==(const Section&, const Section&) = default;

 private:
  std::vector<Complex> values_;
};

class AlgebraContext {
 public:
  /// Throws cartan::Error if the cocycle fails cocycle2_check.
  explicit AlgebraContext(Cocycle2 cocycle);
  static AlgebraContext untwisted(std::shared_ptr<const FiniteGroupoid> g);

  const FiniteGroupoid& groupoid() const noexcept { return cocycle_.groupoid(); }
  const std::shared_ptr<const FiniteGroupoid>& groupoid_ptr() const noexcept { return cocycle_.groupoid_ptr(); }
  const Cocycle2& cocycle() const noexcept { return cocycle_; }

  Section zero() const { return Section(groupoid().arrow_count()); }

 private:
  Cocycle2 cocycle_;
};

Section conv(const AlgebraContext& ctx, const Section& f, const Section& g);
Section star(const AlgebraContext& ctx, const Section& f);

/// π_x(f) on the basis G_x (sorted arrows with source x).
ComplexMatrix regular_rep(const AlgebraContext& ctx, UnitIndex x, const Section& f);

double i_norm(const AlgebraContext& ctx, const Section& f);
double reduced_norm(const AlgebraContext& ctx, const Section& f);

/// Restriction to unit arrows.
Section restriction_P(const AlgebraContext& ctx, const Section& f);

/// conv(h, f) == conv(f, h) for every unit indicator h.
bool commutes_with_diagonal(const AlgebraContext& ctx, const Section& f, double tolerance = 1e-12);

/// Solves for the commutant of the diagonal and compares its dimension with
/// the number of units.
bool is_masa(const AlgebraContext& ctx);

/// n h n^* and n^* h n are diagonal for every unit indicator h.
bool normalizer_membership(const AlgebraContext& ctx, const Section& n, double tolerance = 1e-12);
bool open_support_is_bisection(const AlgebraContext& ctx, const Section& n);

/// f written as a sum of sections each supported on a bisection: one piece
/// per arrow of supp′(f), paired with the singleton bisection carrying it.
std::vector<std::pair<Bisection, Section>> bisection_decomposition(const AlgebraContext& ctx, const Section& f);

/// Rebuilds every indicator section from its bisection decomposition and
/// checks that the pieces span the whole algebra.
bool regularity_check(const AlgebraContext& ctx);

/// Dimension of the affine space of linear maps Q from sections onto the
/// diagonal with Q = id on the diagonal and Q(h f k) = h Q(f) k for diagonal
/// h, k. Zero means restriction_P is the only one.
std::size_t bimodular_expectation_freedom(const AlgebraContext& ctx);

// ---------------------------------------------------------------------------

struct MatrixBlock {
  UnitIndex base;                 // least unit of the orbit
  std::vector<UnitIndex> units;   // the orbit
  std::vector<ArrowIndex> basis;  // G_base, indexing rows and columns
};

/// Where an arrow's indicator lands: a single entry of one block.
struct MatrixLabel {
  ArrowIndex arrow;
  std::size_t block;
  std::size_t row;
  std::size_t col;
  Complex phase;
};

/// One block π_x per orbit, x the least unit of the orbit.
class MatrixModel {
 public:
  explicit MatrixModel(AlgebraContext ctx);

  const AlgebraContext& context() const noexcept { return ctx_; }
  const std::vector<MatrixBlock>& blocks() const noexcept { return blocks_; }
  std::vector<std::size_t> block_sizes() const;
  /// Labels for every arrow whose indicator has an entry in some block,
  /// ordered by (arrow, block, row, col).
  const std::vector<MatrixLabel>& labels() const noexcept { return labels_; }

  std::vector<ComplexMatrix> embed(const Section& f) const;
  /// embed(f) assembled block-diagonally.
  ComplexMatrix embed_block_diagonal(const Section& f) const;

  /// Largest singular value over the blocks.
  double norm(const Section& f) const;

 private:
  AlgebraContext ctx_;
  std::vector<MatrixBlock> blocks_;
  std::vector<MatrixLabel> labels_;
};

MatrixModel matrix_model(const AlgebraContext& ctx);

}  // namespace cartan
