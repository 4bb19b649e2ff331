#pragma once

// The product of two completely spatial systems Π(F¹) and Π(F²), realized as
// Π(F¹ ⊕ F²) together with embeddings and projections of the index.

#include "prodsys/trotter.hpp"

namespace prodsys {

struct ProductSystemPair {
  Bimodule factor1;
  Bimodule factor2;
  DirectSum sum;

  const Bimodule& product() const { return sum.module; }
};

ProductSystemPair build_product(const Bimodule& f1, const Bimodule& f2);

/// (β, ι_ℓ ζ).
UnitParams embed_unit(const ProductSystemPair& pair, int side, const UnitParams& p);
/// (β, p_ℓ ζ).
UnitParams project_unit(const ProductSystemPair& pair, int side, const UnitParams& p);

/// p ↦ ((embed₁ e₁ ⊗ embed₂ e₂) ⊗ (δ, 0)), the reassembly used by the unit decomposition.
UnitParams reassemble(const ProductSystemPair& pair, const UnitParams& e1, const UnitParams& e2,
                      const AlgebraElement& drift);

/// Distance between p and trotter(trotter(embed(1, proj(1, p)), embed(2, proj(2, p))), (−β, 0)).
double decompose_residual(const ProductSystemPair& pair, const UnitParams& p);
bool decompose_check(const ProductSystemPair& pair, const UnitParams& p, double tol = 1e-12);

/// The exponential factors (0, p_ℓ ζ) of a unit of the product.
std::pair<UnitParams, UnitParams> exponential_factors(const ProductSystemPair& pair, const UnitParams& p);

struct MorphismSum {
  BMatrix w;      // ι₁a₁ + ι₂a₂ : F → F¹ ⊕ F²
  BMatrix w_adj;  // a₁*p₁ + a₂*p₂
};

/// Requires a_ℓ : F → F^ℓ bilinear; throws PreconditionError otherwise.
MorphismSum morphism_sum(const ProductSystemPair& pair, const Bimodule& source, const BMatrix& a1,
                         const BMatrix& a2, double tol = 1e-10);

/// Largest residual of
///   ⟨ξ_t(0, ζ¹ ⊕ ζ²), ξ_t(0, ζ¹' ⊕ ζ²')⟩ = ⟨ξ_t(0, ζ¹), ξ_t(0, ζ¹')⟩ · ⟨ξ_t(0, ζ²), ξ_t(0, ζ²')⟩
/// relative to the left-hand side, plus the vacuum isometry ⟨ω, ω⟩ = ⟨ω, ω⟩⟨ω, ω⟩.
/// Every inner product is evaluated through unit_inner. Throws DimensionError
/// unless the algebra is ℂ.
double scalar_tensor_residual(const ProductSystemPair& pair, const ModuleVector& z1, const ModuleVector& z1p,
                              const ModuleVector& z2, const ModuleVector& z2p, double t);
bool scalar_tensor_check(const ProductSystemPair& pair, const ModuleVector& z1, const ModuleVector& z1p,
                         const ModuleVector& z2, const ModuleVector& z2p, double t, double tol = 1e-12);

}  // namespace prodsys
