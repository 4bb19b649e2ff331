#pragma once

#include <string>
#include <vector>

#include "prodsys/bimodule.hpp"

namespace prodsys {

/// Kernel on a finite label set S with values in the maps B → B.
class CPDKernel {
 public:
  /// `entries` is row-major: entries[i·|S| + j] = K^{σ_i, σ_j}.
  CPDKernel(std::vector<std::string> labels, std::vector<SuperOperator> entries);

  /// K^{σσ'}(b) = ⟨x_σ, b x_σ'⟩ for a vector family in a common module.
  static CPDKernel from_vectors(const Bimodule& f, std::vector<std::string> labels,
                                const std::vector<ModuleVector>& vectors);

  const Algebra& algebra() const { return alg_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;
  const SuperOperator& at(int i, int j) const { return entries_[static_cast<std::size_t>(i * size() + j)]; }
  SuperOperator& at(int i, int j) { return entries_[static_cast<std::size_t>(i * size() + j)]; }

  /// max ‖K^{σσ'}(u_p)* − K^{σ'σ}(u_p*)‖ over labels and matrix units.
  double symmetry_residual() const;

  /// [K^{σσ'}(u_p* u_q)] ∈ M_{|S|·D}(B), row index (σ, p) with σ outer.
  BMatrix gram() const;

 private:
  std::vector<std::string> labels_;
  std::vector<SuperOperator> entries_;
  Algebra alg_;
};

/// Distance between kernels on the same labels (largest entrywise superoperator norm).
double distance(const CPDKernel& a, const CPDKernel& b);

/// Complete positive definiteness via the single Gram matrix over S × (matrix units).
/// Every finite family (σ_i, a_i, b_i) compresses an amplification of this
/// matrix, so one PSD test covers all of them. Throws SymmetryError when the
/// kernel is not Hermitian.
bool is_cpd(const CPDKernel& k, double tol = kPsdTolerance);

struct Kolmogorov {
  Bimodule module;
  std::vector<ModuleVector> zeta;
};

/// Minimal Kolmogorov decomposition. The module is P·B^{|S|·D}, with P the
/// support projection of the Gram square root R, ζ_σ = R·c_σ and
/// π(a) = R (1_S ⊗ λ(a)) R⁺ where λ is left multiplication on coordinates.
/// Throws PreconditionError if the kernel is not CPD.
Kolmogorov kolmogorov(const CPDKernel& k, double tol = kPsdTolerance);

/// Entrywise exp(t·L^{σσ'}).
CPDKernel semigroup_at(const CPDKernel& l, double t);

/// Entrywise composition (A∘B)^{σσ'} = A^{σσ'}∘B^{σσ'}.
CPDKernel compose(const CPDKernel& a, const CPDKernel& b);

struct CESplit {
  std::vector<AlgebraElement> beta;
  CPDKernel l0;
};

/// L = L0 + β_σ*(·) + (·)β_σ' with β_σ = L^{ω,σ}(1). Requires
/// L^{ω,σ}(b) = b·L^{ω,σ}(1); throws PreconditionError otherwise, or when L0
/// is not CPD (the generator has no Christensen–Evans form relative to ω).
CESplit ce_split(const CPDKernel& l, const std::string& omega, double tol = 1e-10);

/// L0 + β* · + · β, the inverse of ce_split.
CPDKernel ce_recombine(const CESplit& split);

}  // namespace prodsys
