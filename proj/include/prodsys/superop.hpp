#pragma once

#include <functional>

#include "prodsys/algebra.hpp"

namespace prodsys {

/// Linear map B → B stored as a D×D matrix acting on matrix-unit coordinates.
class SuperOperator {
 public:
  SuperOperator(Algebra alg, CMatrix matrix);

  static SuperOperator identity(const Algebra& alg);
  static SuperOperator zero(const Algebra& alg);
  /// Tabulates an arbitrary linear map on the matrix units.
  static SuperOperator from_map(const Algebra& alg,
                                const std::function<AlgebraElement(const AlgebraElement&)>& map);
  /// b ↦ x b y.
  static SuperOperator sandwich(const AlgebraElement& x, const AlgebraElement& y);
  /// b ↦ x* b x.
  static SuperOperator conjugation(const AlgebraElement& x) { return sandwich(x.adjoint(), x); }

  const Algebra& algebra() const { return alg_; }
  const CMatrix& matrix() const { return m_; }

  AlgebraElement operator()(const AlgebraElement& b) const;

  /// b ↦ T(b*)*; T is hermiticity preserving iff it equals its own conjugate.
  SuperOperator conjugate() const;
  bool is_hermiticity_preserving(double tol = 1e-12) const;

  /// Induced norm for the Hilbert–Schmidt norm on B (spectral norm of the coordinate matrix).
  double norm() const;

  SuperOperator& operator+=(const SuperOperator& rhs);
  SuperOperator& operator-=(const SuperOperator& rhs);
  SuperOperator& operator*=(Complex s);

  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
  friend SuperOperator operator*(SuperOperator a, Complex s) { return a *= s; }
  friend SuperOperator operator*(Complex s, SuperOperator a) { return a *= s; }
  /// Composition: (S * T)(b) = S(T(b)).
  friend SuperOperator operator*(const SuperOperator& s, const SuperOperator& t);

 private:
  Algebra alg_;
  CMatrix m_;
};

inline double distance(const SuperOperator& a, const SuperOperator& b) { return (a - b).norm(); }

/// exp(tL).
SuperOperator superop_exp(const SuperOperator& generator, double t);

/// Element of M_{r×c}(B). Block l stores the (r·d_l)×(c·d_l) complex matrix,
/// entry (i, j) occupying rows [i·d_l, (i+1)·d_l) and columns [j·d_l, (j+1)·d_l).
class BMatrix {
 public:
  BMatrix() = default;
  BMatrix(const Algebra& alg, int rows, int cols);
  BMatrix(int rows, int cols, std::vector<CMatrix> blocks);

  static BMatrix identity(const Algebra& alg, int k);
  /// s ⊗ 1_B for a scalar matrix s.
  static BMatrix scalar(const Algebra& alg, const CMatrix& s);
  /// diag(a, ..., a) with k copies.
  static BMatrix diagonal(const AlgebraElement& a, int k);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Algebra algebra() const;
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const CMatrix& block(int l) const { return blocks_[static_cast<std::size_t>(l)]; }
  CMatrix& block(int l) { return blocks_[static_cast<std::size_t>(l)]; }

  AlgebraElement entry(int i, int j) const;
  void set_entry(int i, int j, const AlgebraElement& a);

  BMatrix adjoint() const;
  /// C*-norm (largest blockwise spectral norm).
  double norm() const;
  bool same_shape(const BMatrix& other) const;

  BMatrix& operator+=(const BMatrix& rhs);
  BMatrix& operator-=(const BMatrix& rhs);
  BMatrix& operator*=(Complex s);

  friend BMatrix operator+(BMatrix a, const BMatrix& b) { return a += b; }
  friend BMatrix operator-(BMatrix a, const BMatrix& b) { return a -= b; }
  friend BMatrix operator*(BMatrix a, Complex s) { return a *= s; }
  friend BMatrix operator*(Complex s, BMatrix a) { return a *= s; }
  friend BMatrix operator*(const BMatrix& a, const BMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> sizes_;
  std::vector<CMatrix> blocks_;
};

inline double distance(const BMatrix& a, const BMatrix& b) { return (a - b).norm(); }

/// Smallest relative eigenvalue over the blocks of a square Hermitian B-matrix,
/// i.e. of its flattening into M_{n·N}(ℂ).
double min_relative_eigenvalue(const BMatrix& hermitian);

/// PSD test for a square B-matrix: every block eigenvalue ≥ −tol·(largest magnitude).
/// Throws SymmetryError when the matrix is not Hermitian within tol.
bool is_psd(const BMatrix& m, double tol = kPsdTolerance);

/// Choi-type matrix [T(u_p* u_q)]_{p,q} ∈ M_D(B).
BMatrix choi_matrix(const SuperOperator& t);

/// Complete positivity via the Choi-type matrix. Throws SymmetryError unless
/// T is hermiticity preserving.
bool is_completely_positive(const SuperOperator& t, double tol = kPsdTolerance);

}  // namespace prodsys
