#pragma once

#include <utility>
#include <vector>

#include "prodsys/tof_units.hpp"

namespace prodsys {

struct WeightedUnits {
  std::vector<std::pair<Complex, UnitParams>> terms;

  /// Throws PreconditionError unless Σκ_i = 1 within tol.
  void validate(double tol = 1e-12) const;
};

/// (Σκ_iβ_i, Σκ_iζ_i).
UnitParams boxplus(const WeightedUnits& w);

/// (β₁ + β₂, ζ₁ + ζ₂), i.e. p₁ ⊞ p₂ ⊟ ω.
UnitParams trotter_product(const UnitParams& p1, const UnitParams& p2);

struct Exponentialized {
  UnitParams exp_part;  // (0, ζ)
  AlgebraElement drift;  // β
};

Exponentialized exponentialize(const UnitParams& p);

/// Y_s(b) = Σ_{ij} κ̄_i κ_j ⟨ξ^i_s, b ξ^j_s⟩, applied n times with s = t/n.
AlgebraElement approximant_semigroup(const Bimodule& f, const WeightedUnits& w, double t, int n,
                                     const AlgebraElement& b);
/// The map b ↦ Y_{t/n}^n(b).
SuperOperator approximant_map(const Bimodule& f, const WeightedUnits& w, double t, int n);

/// Z_s(b) = Σ_i κ_i ⟨ξ'_s, b ξ^i_s⟩, applied n times with s = t/n.
AlgebraElement cross_approximant(const Bimodule& f, const UnitParams& reference, const WeightedUnits& w, double t,
                                 int n, const AlgebraElement& b);
SuperOperator cross_approximant_map(const Bimodule& f, const UnitParams& reference, const WeightedUnits& w,
                                    double t, int n);

/// Same constructions along an arbitrary partition of [0, t] given by its step lengths.
SuperOperator approximant_map(const Bimodule& f, const WeightedUnits& w, const std::vector<double>& steps);

}  // namespace prodsys
