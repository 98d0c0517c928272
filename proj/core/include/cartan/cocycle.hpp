#pragma once

// Normalized unit-modulus 2-cocycles on finite groupoids and their
// Feldman–Moore form on equivalence relations.
//
// A twist over a finite discrete groupoid always has a global section, so it
// is represented by a cocycle σ on composable pairs satisfying
//   σ(a,b) σ(ab,c) = σ(b,c) σ(a,bc),   σ(a,b) = 1 if a or b is a unit.

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cartan/groupoid.hpp"

namespace cartan {

using Complex = std::complex<double>;

/// Values within this distance of modulus one are rescaled onto the circle;
/// anything further away is rejected.
inline constexpr double kUnitModulusSlack = 1e-9;

/// Rescales z onto the unit circle or throws cartan::Error.
Complex to_unit_modulus(Complex z, const std::string& what);

/// Function on arrows with unit-modulus values, 1 on unit arrows.
struct Cochain1 {
  std::vector<Complex> values;  // indexed by arrow

  Complex operator()(ArrowIndex a) const { return values[a]; }
};

/// Cochain1 that is identically one.
Cochain1 trivial_cochain(const FiniteGroupoid& g);

class Cocycle2 {
 public:
  using Entry = std::tuple<ArrowIndex, ArrowIndex, Complex>;

  static Cocycle2 trivial(std::shared_ptr<const FiniteGroupoid> g);
  /// Unlisted composable pairs default to 1. Throws on non-composable pairs
  /// and values too far from the unit circle.
  static Cocycle2 from_entries(std::shared_ptr<const FiniteGroupoid> g, const std::vector<Entry>& entries);

  const FiniteGroupoid& groupoid() const noexcept { return *groupoid_; }
  const std::shared_ptr<const FiniteGroupoid>& groupoid_ptr() const noexcept { return groupoid_; }

  /// Value at a composable pair (1 elsewhere).
  Complex operator()(ArrowIndex a, ArrowIndex b) const { return values_[a * n_ + b]; }
  void set(ArrowIndex a, ArrowIndex b, Complex value);

  /// Pointwise product and conjugate (the group structure on cocycles).
  Cocycle2 times(const Cocycle2& other) const;
  Cocycle2 conjugate() const;

  /// Pulls back along a groupoid isomorphism `iso` from `source` to this
  /// cocycle's groupoid.
  Cocycle2 pullback(std::shared_ptr<const FiniteGroupoid> source, const GroupoidIsomorphism& iso) const;

  /// Max |σ(a,b) - τ(a,b)| over composable pairs.
  double distance(const Cocycle2& other) const;

 private:
  Cocycle2(std::shared_ptr<const FiniteGroupoid> g);

  std::shared_ptr<const FiniteGroupoid> groupoid_;
  std::size_t n_ = 0;
  std::vector<Complex> values_;
};

struct CocycleCheck {
  bool ok = true;
  /// "normalization" or "identity"; empty when ok.
  std::string failure;
  /// The offending pair or triple of arrows.
  std::vector<ArrowIndex> counterexample;
};

CocycleCheck cocycle2_check(const Cocycle2& sigma, double tolerance = 1e-12);

/// σ(a,b) = c(a) c(b) / c(ab).
Cocycle2 coboundary(const Cochain1& c, std::shared_ptr<const FiniteGroupoid> g);

/// Solves σ = coboundary(c). Tree arrows from the least unit of each orbit
/// get c = 1 (arrows taken in lexicographic order); the isotropy group at
/// that unit is solved exactly over R/Z, and the remaining values follow by
/// propagation. Every constraint is re-verified before a witness is returned.
/// Throws if σ fails cocycle2_check.
std::optional<Cochain1> is_coboundary(const Cocycle2& sigma, double tolerance = 1e-12);

/// Witness c with coboundary(c) = s1 / s2. Throws if the groupoids differ.
std::optional<Cochain1> cocycles_cohomologous(const Cocycle2& s1, const Cocycle2& s2,
                                              double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Feldman–Moore cocycles σ(x,y,z) on an equivalence relation.

class FMCocycle {
 public:
  /// `relation` must be principal. Triples not listed stay missing.
  FMCocycle(std::shared_ptr<const FiniteGroupoid> relation,
            const std::vector<std::tuple<UnitIndex, UnitIndex, UnitIndex, Complex>>& entries);

  /// Every admissible triple set to one.
  static FMCocycle trivial(std::shared_ptr<const FiniteGroupoid> relation);

  const FiniteGroupoid& relation() const noexcept { return *relation_; }
  const std::shared_ptr<const FiniteGroupoid>& relation_ptr() const noexcept { return relation_; }

  bool related(UnitIndex x, UnitIndex y) const;
  std::optional<Complex> value(UnitIndex x, UnitIndex y, UnitIndex z) const;
  void set(UnitIndex x, UnitIndex y, UnitIndex z, Complex value);

 private:
  std::size_t index(UnitIndex x, UnitIndex y, UnitIndex z) const { return (x * u_ + y) * u_ + z; }

  std::shared_ptr<const FiniteGroupoid> relation_;
  std::size_t u_ = 0;
  std::vector<std::optional<Complex>> values_;
};

struct FMCheck {
  bool ok = true;
  std::optional<std::array<UnitIndex, 4>> counterexample;  // (x, y, z, t)
};

/// σ(x,y,z) σ(x,z,t) = σ(x,y,t) σ(y,z,t) on all related quadruples. Throws
/// if a value is missing for an admissible triple.
FMCheck fm_cocycle_check(const FMCocycle& sigma, double tolerance = 1e-12);

/// σ(x,y,z) = c(x,y) c(y,z) / c(x,z), with c indexed by the relation's
/// arrows (x,y) from y to x.
FMCocycle fm_coboundary(const Cochain1& c, std::shared_ptr<const FiniteGroupoid> relation);

/// result((x,y),(y,z)) = σ(x,y,z), renormalized on unit arrows by a
/// coboundary supported on units.
Cocycle2 fm_to_groupoid(const FMCocycle& sigma);

}  // namespace cartan
