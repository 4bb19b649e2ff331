#pragma once

// Units of the free flow product system and the resummed inner-product
// formulas that identify its index with F ⊙ 𝔉(L²(ℝ₊)), truncated at N particles.

#include <string>
#include <vector>

#include "prodsys/tof_units.hpp"

namespace prodsys {

/// (t_n, ..., t_1), leftmost entry first.
using TimeTuple = std::vector<double>;

struct TupleDecomposition {
  std::vector<TimeTuple> parts;  // leftmost subtuple first
  std::vector<int> offsets;      // start of each part in the input
};

/// Greedy split: the leftmost remaining entry leads a subtuple that absorbs
/// every following entry ≥ it; the first strictly smaller entry starts the next.
TupleDecomposition decompose(const TimeTuple& tuple);

/// "[3][1 2 2 1]".
std::string format_decomposition(const TupleDecomposition& d);

/// True when `parts` satisfies the segmentation conditions: each part's
/// entries are ≥ its leader and leaders decrease strictly from left to right.
bool is_valid_segmentation(const std::vector<TimeTuple>& parts);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // half-open [lo, hi)

  bool contains(double s) const { return s >= lo && s < hi; }
  double length() const { return hi - lo; }
};

/// c · 𝕀_{I_1}(s_1) ⋯ 𝕀_{I_{n-1}}(s_{n-1}) with c ∈ F^{⊙n}.
struct IndicatorTerm {
  std::vector<Interval> box;
  ModuleVector coeff;
};

/// ζ = ⊕_{n ≤ N} ζⁿ with ζⁿ a finite sum of indicator terms on ℝ₊^{n-1}.
class FreeUnitParam {
 public:
  explicit FreeUnitParam(int truncation);

  int truncation() const { return static_cast<int>(components_.size()); }
  const std::vector<IndicatorTerm>& component(int n) const;
  /// Appends a term to ζⁿ; the box must have n−1 intervals of positive finite length.
  void add_term(int n, IndicatorTerm term);
  FreeUnitParam scaled(Complex s) const;
  /// Largest interval end point over all terms (0 if there are none).
  double extent() const;

 private:
  std::vector<std::vector<IndicatorTerm>> components_;
};

/// ζⁿ(s_1, ..., s_{n-1}) ∈ F^{⊙n}.
ModuleVector evaluate_component(TensorPowers& powers, const FreeUnitParam& z, int n, const std::vector<double>& args);

struct ComponentValue {
  ModuleVector value;
  /// The tuple lies outside [0, t) × ℝ₊^{n-1}; value is zero for that reason.
  bool structural_zero = false;
};

/// ξ_tⁿ(t_n, ..., t_1) = ζ^{k_m}(shifted args) ⊙ ... ⊙ ζ^{k_1}(shifted args).
ComponentValue free_unit_component(TensorPowers& powers, const FreeUnitParam& z, double t, const TimeTuple& tuple);

/// The terms k = 0..n of ξ_{s+t}ⁿ = Σ_k s_t ξ_s^k ⊙ ξ_t^{n-k} at one tuple.
std::vector<ComponentValue> recursion_terms(TensorPowers& powers, const FreeUnitParam& z, double s, double t,
                                            const TimeTuple& tuple);

/// K(c) = ⟨ζ, c ζ'⟩ computed from exact overlaps of the indicator boxes.
SuperOperator overlap_kernel(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp, int n_max);

/// 1 + Σ_m t^m/m! K^m, applied to b; the series is summed until its terms stop contributing.
AlgebraElement free_inner_closed(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp,
                                 const AlgebraElement& b, double t, int n_max);

/// Q_h(c) = Σ_n Σ_{s on the midpoint grid} h^{n-1} ⟨ζⁿ(s), c ζ'ⁿ(s)⟩.
SuperOperator inner_grid_operator(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp, int n_max,
                                  double h, Exec exec = Exec::parallel);

struct FreeQuadratureResult {
  AlgebraElement value;
  int grid = 0;
  double step = 0.0;
  int outer_terms = 0;
};

/// Midpoint rule on the resummed integral: the m ordered leaders range over the
/// grid chains of [0, t) (C(M, m) chains of weight h^m), the offsets over the
/// inner grid. Particle number is capped at n_max, and the outer multiplicity
/// at the first m with t^m ‖Q_h‖^m / m! < 1e−14.
FreeQuadratureResult free_inner_quadrature(TensorPowers& powers, const FreeUnitParam& z, const FreeUnitParam& zp,
                                           const AlgebraElement& b, double t, int n_max, double h,
                                           Exec exec = Exec::parallel);

/// Truncated index ⊕_{n ≤ N} (step functions on the cells of `grid`, valued in
/// F^{⊙n}), one copy of F^{⊙n} per cell of ℝ₊^{n-1}, scaled so that the module
/// inner product is the L² overlap.
struct FreeIndex {
  Bimodule module;
  std::vector<double> grid;
  int truncation = 0;
  std::vector<int> offsets;  // first coordinate of each particle-number sector

  int cells() const { return static_cast<int>(grid.size()) - 1; }
  /// Requires every interval end point of z to lie on the grid.
  ModuleVector embed(TensorPowers& powers, const FreeUnitParam& z, double tol = 1e-12) const;
};

FreeIndex free_index(TensorPowers& powers, std::vector<double> grid, int truncation);

}  // namespace prodsys
