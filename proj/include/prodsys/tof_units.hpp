#pragma once

// Units of the time-ordered Fock module Π(F), parametrized by (β, ζ) ∈ B × F,
// and the morphisms Γ = (γ η*; η' a) between such systems.

#include <string>
#include <vector>

#include "prodsys/cpd_kernel.hpp"

namespace prodsys {

struct UnitParams {
  AlgebraElement beta;
  ModuleVector zeta;

  static UnitParams vacuum(const Bimodule& f);
};

double distance(const UnitParams& a, const UnitParams& b);

/// L(b) = ⟨ζ, bζ'⟩ + β*b + bβ'.
SuperOperator generator(const Bimodule& f, const UnitParams& p, const UnitParams& q);

/// ⟨ξ_t, b ξ'_t⟩ = exp(t·L)(b).
AlgebraElement unit_inner(const Bimodule& f, const UnitParams& p, const UnitParams& q, double t,
                          const AlgebraElement& b);

/// Generator kernel on a labelled family of units.
CPDKernel unit_kernel(const Bimodule& f, const std::vector<std::string>& labels,
                      const std::vector<UnitParams>& units);

/// ξ_t^n(t_n, ..., t_1) = e^{(t-t_n)β}ζ ⊙ e^{(t_n-t_{n-1})β}ζ ⊙ ... ⊙ e^{(t_2-t_1)β}ζ · e^{t_1 β}
/// in F^{⊙n}. The tuple is given leftmost first and must decrease strictly inside (0, t).
ModuleVector exponential_unit_component(TensorPowers& powers, const UnitParams& p, double t,
                                        const std::vector<double>& tuple);

enum class Exec { serial, parallel };

struct QuadratureResult {
  AlgebraElement value;
  /// Grid size M and effective step t/M.
  int grid = 0;
  double step = 0.0;
  /// Bound on the particle-number tail Σ_{n > n_max}.
  double truncation_bound = 0.0;
};

/// Midpoint rule on the ordered simplex grid, particle numbers 0..n_max.
/// The step is adjusted to t/M with M = ⌈t/h⌉.
QuadratureResult quadrature_inner(const Bimodule& f, const UnitParams& p, const UnitParams& q, double t,
                                  const AlgebraElement& b, int n_max, double h, Exec exec = Exec::parallel);

struct MorphismMatrix {
  AlgebraElement gamma;
  ModuleVector eta;        // in the source index F
  ModuleVector eta_prime;  // in the target index F'
  BMatrix a;               // F → F'

  static MorphismMatrix identity(const Bimodule& f);
  /// (γ*, η', η, a*): the morphism in the opposite direction.
  MorphismMatrix adjoint() const;
};

/// (γ + β + ⟨η, ζ⟩, η' + aζ).
UnitParams apply_morphism(const MorphismMatrix& g, const UnitParams& p);

/// a π_F(u_p) = π_F'(u_p) a for every p, and a = P' a P.
bool is_bilinear(const Bimodule& source, const Bimodule& target, const BMatrix& a, double tol = 1e-12);

/// a bilinear with a*a = P_F and aa* = P_F'.
bool is_isomorphism(const Bimodule& source, const Bimodule& target, const MorphismMatrix& g, double tol = 1e-10);

/// γ and η' central, η = −a*η' and γ + γ* = −⟨η', η'⟩.
bool satisfies_automorphism_constraints(const Bimodule& f, const MorphismMatrix& g, double tol = 1e-10);

/// Γ fixes the vacuum and so does its adjoint; equivalent to γ = 0, η = 0, η' = 0.
bool is_spatial(const MorphismMatrix& g, double tol = 1e-12);

struct CentralUnital {
  bool central = false;
  bool unital = false;
};

CentralUnital is_central_unital(const Bimodule& f, const UnitParams& p, double tol = 1e-10);

/// a = id_F, η' = ζ, γ = β, η = −ζ. Requires p central and unital.
MorphismMatrix automorphism_to(const Bimodule& f, const UnitParams& p, double tol = 1e-10);

}  // namespace prodsys
