#pragma once

// Finitely generated Hilbert B-B-modules in the form F = P·B^k, where the left
// action is a *-homomorphism π: B → M_k(B) with π(1) = P.

#include <deque>
#include <vector>

#include "prodsys/superop.hpp"

namespace prodsys {

/// Column x = (x_1, ..., x_k) ∈ B^k.
class ModuleVector {
 public:
  ModuleVector() = default;
  explicit ModuleVector(BMatrix column);

  static ModuleVector zero(const Algebra& alg, int rank);
  /// e_i · b.
  static ModuleVector basis(const Algebra& alg, int rank, int i, const AlgebraElement& b);
  static ModuleVector from_entries(const std::vector<AlgebraElement>& entries);
  /// Inverse of coords(): k·D complex numbers, entry-major.
  static ModuleVector from_coords(const Algebra& alg, int rank, const CVector& coords);

  int rank() const { return m_.rows(); }
  Algebra algebra() const { return m_.algebra(); }
  const BMatrix& column() const { return m_; }
  AlgebraElement entry(int i) const { return m_.entry(i, 0); }
  std::vector<AlgebraElement> entries() const;
  CVector coords() const;

  /// Gram norm ‖⟨x,x⟩‖^{1/2}.
  double norm() const;

  ModuleVector& operator+=(const ModuleVector& rhs);
  ModuleVector& operator-=(const ModuleVector& rhs);
  ModuleVector& operator*=(Complex s);

  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator-(ModuleVector a) { return a *= Complex(-1.0); }
  friend ModuleVector operator*(ModuleVector a, Complex s) { return a *= s; }
  friend ModuleVector operator*(Complex s, ModuleVector a) { return a *= s; }
  /// Right action x·b.
  friend ModuleVector operator*(const ModuleVector& x, const AlgebraElement& b);
  /// Module map applied to a vector.
  friend ModuleVector operator*(const BMatrix& a, const ModuleVector& x);

 private:
  BMatrix m_;
};

/// ⟨x, y⟩ = Σ x_i* y_i.
AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);

inline double distance(const ModuleVector& a, const ModuleVector& b) { return (a - b).column().norm(); }

/// Gram matrix [⟨x_i, x_j⟩] ∈ M_n(B).
BMatrix gram_matrix(const std::vector<ModuleVector>& family);

class Bimodule {
 public:
  /// `action[p]` is π(u_p), a k×k B-matrix, for every matrix unit u_p of `alg`.
  Bimodule(Algebra alg, int rank, std::vector<BMatrix> action);

  /// B^k with the amplified action a ↦ diag(a, ..., a).
  static Bimodule free(const Algebra& alg, int rank);
  static Bimodule zero(const Algebra& alg) { return free(alg, 0); }

  const Algebra& algebra() const { return alg_; }
  int rank() const { return rank_; }
  const std::vector<BMatrix>& action() const { return pi_; }
  const BMatrix& action(int p) const { return pi_[static_cast<std::size_t>(p)]; }

  /// π(a).
  BMatrix left(const AlgebraElement& a) const;
  /// π(1).
  const BMatrix& projection() const { return proj_; }
  /// Σ_l rank(P_l): the complex dimension of F as a right B-module, counted per block.
  int flat_rank() const;

  ModuleVector act(const AlgebraElement& a, const ModuleVector& x) const;
  ModuleVector project(const ModuleVector& x) const { return proj_ * x; }
  bool contains(const ModuleVector& x, double tol = 1e-10) const;
  /// Throws DimensionError unless x has this module's rank and algebra.
  void require_member(const ModuleVector& x) const;

  /// Largest residual among π(u_p u_q) = π(u_p)π(u_q), π(u_p*) = π(u_p)*, P² = P = P*.
  double invariant_residual() const;

  /// Linear map x ↦ π(a) x on coordinates (k·D × k·D).
  CMatrix left_coords(const AlgebraElement& a) const;

 private:
  Algebra alg_;
  int rank_;
  std::vector<BMatrix> pi_;
  BMatrix proj_;
};

/// Index map for a direct sum; ι and p are scalar B-matrices.
struct DirectSum {
  Bimodule module;
  BMatrix iota1, iota2;
  BMatrix proj1, proj2;

  ModuleVector embed1(const ModuleVector& x) const { return iota1 * x; }
  ModuleVector embed2(const ModuleVector& y) const { return iota2 * y; }
  ModuleVector part1(const ModuleVector& z) const { return proj1 * z; }
  ModuleVector part2(const ModuleVector& z) const { return proj2 * z; }
};

DirectSum direct_sum(const Bimodule& f, const Bimodule& g);

/// F ⊙ G realized inside B^{k_F·k_G} (F index outer). x ⊙ y is sent to
/// (π_G(x_i) y)_i, which satisfies xb ⊙ y = x ⊙ by identically, so no null
/// space has to be divided out.
Bimodule tensor_over_B(const Bimodule& f, const Bimodule& g);

/// x ⊙ y ∈ F ⊙ G; only the left action of G is needed.
ModuleVector tensor_vectors(const Bimodule& g, const ModuleVector& x, const ModuleVector& y);

/// Lazily built F^{⊙n}, with F^{⊙0} = B and F^{⊙n} = F ⊙ F^{⊙(n-1)}.
/// The realization is strictly associative, so F^{⊙a} ⊙ F^{⊙b} is F^{⊙(a+b)}.
class TensorPowers {
 public:
  explicit TensorPowers(Bimodule f);

  const Bimodule& base() const { return powers_[1]; }
  const Bimodule& power(int n);
  /// x ⊙ y for x ∈ F^{⊙a}, y ∈ F^{⊙b}.
  ModuleVector tensor(const ModuleVector& x, int b, const ModuleVector& y);

 private:
  std::deque<Bimodule> powers_;  // stable references
};

/// Basis (orthonormal over ℂ in coordinates) of C_B(F) = {x ∈ F : bx = xb for all b}.
std::vector<ModuleVector> center(const Bimodule& f, double tol = kRankCutoff);

/// x ∈ C_B(F) within tol·max(1, ‖x‖).
bool is_central_vector(const Bimodule& f, const ModuleVector& x, double tol = 1e-10);

}  // namespace prodsys
