#pragma once

// Weyl reconstruction for finite-dimensional Cartan pairs: normalizers and
// their partial bijections of the spectrum, the Weyl groupoid of germs, the
// twist as a 2-cocycle, the evaluation map a ↦ â, and the round trip from a
// twisted groupoid back to itself.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cartan/cartan_pair.hpp"
#include "cartan/cocycle.hpp"
#include "cartan/convolution.hpp"
#include "cartan/groupoid.hpp"

namespace cartan {

/// The commutant of B inside A is B.
bool masa_check(const CartanPairModel& pair);

/// n p_x n* and n* p_x n lie in B for every spectrum point x, and n ∈ A.
bool is_normalizer(const CartanPairModel& pair, const ComplexMatrix& n, double tolerance = 1e-10);

/// Normalizer spanning p_x A p_y, scaled to a partial isometry whose first
/// nonzero entry (column-major) is real and positive.
struct GeneratingNormalizer {
  std::size_t range;   // x
  std::size_t source;  // y
  ComplexMatrix matrix;
};

/// One element per pair (x, y) with p_x A p_y ≠ 0, ordered by (x, y). For the
/// full matrix algebra these are exactly the matrix units. Throws if B is not
/// a masa.
std::vector<GeneratingNormalizer> find_normalizers(const CartanPairModel& pair);

/// α_n on dom(n) = {x : n*n(x) > 0}, characterized by n* b n(x) = b(α_n(x)) n*n(x).
/// Throws if n is not a normalizer.
PartialBijection alpha_of(const CartanPairModel& pair, const ComplexMatrix& n, double tolerance = 1e-10);

/// Closure of {α_n : n generating} under composition and inverses.
std::vector<PartialBijection> weyl_pseudogroup(const CartanPairModel& pair);

/// Spectrum point labels "x0", "x1", ... zero-padded so that lexicographic and
/// numeric order agree.
std::vector<std::string> spectrum_labels(const CartanPairModel& pair);

struct WeylGroupoid {
  std::shared_ptr<const FiniteGroupoid> groupoid;
  /// Spectrum point of each unit.
  std::vector<std::size_t> point_of_unit;
  /// Unit of each spectrum point.
  std::vector<UnitIndex> unit_of_point;
  /// Default witness per arrow: the generating normalizer for (r, s).
  std::vector<ComplexMatrix> witness;
};

/// Germ groupoid of the Weyl pseudogroup; over a discrete spectrum this is the
/// orbit relation, so the result is principal.
WeylGroupoid weyl_groupoid(const CartanPairModel& pair);

/// σ(γ1, γ2) = phase of λ where n_{γ1} n_{γ2} p_z = λ n_{γ1γ2} p_z, z = s(γ2).
/// `section_choice` holds one normalizer per arrow of weyl.groupoid; unit
/// arrows must be positive multiples of their projection. Empty means the
/// default witnesses. Throws if the choice is invalid or incomplete.
Cocycle2 weyl_twist(const CartanPairModel& pair, const WeylGroupoid& weyl,
                    const std::vector<ComplexMatrix>& section_choice = {});

/// The class [α_n(y), n, y] of the twist, recorded as the arrow (α_n(y), y)
/// and the phase of n relative to that arrow's default witness at y.
struct TwistClass {
  ArrowIndex arrow;
  Complex phase;
};

TwistClass twist_class(const CartanPairModel& pair, const WeylGroupoid& weyl, const ComplexMatrix& n,
                       std::size_t y);

/// Every normalizer whose α is the identity on its domain lies in B. Checked
/// on the generating family and on random diagonal multiples of it.
bool kernel_commutant_check(const CartanPairModel& pair, std::uint64_t seed = 1);

/// â(γ) = P(n_γ* a)(y) / sqrt(n_γ* n_γ (y)) with γ = (x, y) and n_γ the
/// default witness. `a` must lie in A.
Section evaluation(const CartanPairModel& pair, const WeylGroupoid& weyl, const ComplexMatrix& a);

/// |P(n)(x)|² / n*n(x) for x ∈ dom(n).
double transition_probability(const CartanPairModel& pair, const ComplexMatrix& n, std::size_t x);

struct UniqueExtensionReport {
  bool is_principal_weyl = false;
  bool free_normalizer_span_equals_ker_P = false;
  bool commutator_decomposition = false;
};

/// (a) the Weyl groupoid is principal; (b) ker P ∩ A is spanned by generating
/// normalizers with n² = 0; (c) A = B + span{ab - ba : a ∈ A, b ∈ B}.
UniqueExtensionReport unique_extension_analysis(const CartanPairModel& pair);

/// P(n)(x) == 0 exactly whenever α_n(x) ≠ x, for each generating normalizer
/// (or for the given normalizers).
bool separation_check(const CartanPairModel& pair);
bool separation_check(const CartanPairModel& pair, const std::vector<ComplexMatrix>& normalizers);

// ---------------------------------------------------------------------------

/// Cartan pair of the matrix model of ctx: one block per orbit, standard
/// diagonal, A generated by the embedded arrow indicators.
CartanPairModel cartan_pair_of(const MatrixModel& model);

struct RoundtripReport {
  GroupoidIsomorphism isomorphism;           // g -> Weyl groupoid
  std::optional<Cochain1> cocycle_witness;   // coboundary(witness) = s / pullback(twist)
  double cocycle_residual = 0.0;             // max |coboundary(witness) - s / pullback(twist)|
  double star_isomorphism_residual = 0.0;    // Ψ(ab) vs Ψ(a)*Ψ(b), Ψ(a*) vs Ψ(a)*
  double embedding_residual = 0.0;           // Ψ∘embed vs f, up to a cochain gauge
  bool diagonal_preserved = false;           // Ψ(p_x) is the unit indicator at x
  bool ok = false;
};

/// (g, s) → matrix model → Cartan pair → Weyl groupoid and twist → compare.
/// Throws if g is not principal or has more than `max_units` units.
RoundtripReport roundtrip_check(const Cocycle2& s, std::size_t samples = 8, std::uint64_t seed = 7,
                                std::size_t max_units = 10);

}  // namespace cartan
