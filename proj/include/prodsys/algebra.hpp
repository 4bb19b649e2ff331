#pragma once

// Finite-dimensional unital C*-algebras B = M_{d_1} ⊕ ... ⊕ M_{d_K} and their
// elements. Coordinates always refer to the matrix-unit basis ordered block by
// block, row-major inside each block.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace prodsys {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Default PSD tolerance, relative to the largest eigenvalue magnitude.
inline constexpr double kPsdTolerance = 1e-9;
/// Relative singular-value cutoff used by Gram factorizations.
inline constexpr double kRankCutoff = 1e-10;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different algebras or modules.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Self-adjointness, hermiticity preservation or kernel symmetry violated.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// An operation's documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class Algebra {
 public:
  struct Unit {
    int block;
    int row;
    int col;
  };

  explicit Algebra(std::vector<int> block_sizes);

  /// M_d.
  static Algebra matrix(int d);
  /// ℂ.
  static Algebra scalars() { return matrix(1); }

  const std::vector<int>& block_sizes() const { return sizes_; }
  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int block_size(int l) const { return sizes_[static_cast<std::size_t>(l)]; }
  /// Sum of the block sizes: B sits block-diagonally inside M_N.
  int matrix_size() const;
  /// Complex dimension D = Σ d_k².
  int dim() const { return dim_; }
  int offset(int l) const { return offsets_[static_cast<std::size_t>(l)]; }

  Unit unit(int p) const;
  int index(int block, int row, int col) const;

  bool operator==(const Algebra& other) const { return sizes_ == other.sizes_; }

  std::string describe() const;

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(std::vector<CMatrix> blocks);

  static AlgebraElement zero(const Algebra& alg);
  static AlgebraElement identity(const Algebra& alg);
  /// Matrix unit u_p.
  static AlgebraElement unit(const Algebra& alg, int p);
  static AlgebraElement from_coords(const Algebra& alg, const CVector& coords);
  /// Central element Σ_k c_k 1_k.
  static AlgebraElement central(const Algebra& alg, const std::vector<Complex>& per_block);

  Algebra algebra() const;
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const CMatrix& block(int l) const { return blocks_[static_cast<std::size_t>(l)]; }
  CMatrix& block(int l) { return blocks_[static_cast<std::size_t>(l)]; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  CVector coords() const;
  AlgebraElement adjoint() const;
  /// C*-norm: the largest blockwise spectral norm.
  double norm() const;
  bool is_finite() const;
  bool same_algebra(const AlgebraElement& other) const;

  /// e^{tx}, blockwise.
  AlgebraElement exp(double t = 1.0) const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex s);

  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
  friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
  friend AlgebraElement operator-(AlgebraElement a) { return a *= Complex(-1.0); }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

 private:
  std::vector<CMatrix> blocks_;
};

inline double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).norm(); }

/// x y - y x.
AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y);

/// True when x commutes with every matrix unit, within tol·max(1, ‖x‖).
bool is_central(const AlgebraElement& x, double tol);

/// Smallest eigenvalue of a Hermitian matrix divided by its largest eigenvalue
/// magnitude (0 for the zero matrix).
double min_relative_eigenvalue(const CMatrix& hermitian);

/// Positivity certificate. Throws SymmetryError if b is not self-adjoint
/// within tol·max(1, ‖b‖).
bool is_positive_element(const AlgebraElement& b, double tol = kPsdTolerance);

}  // namespace prodsys
