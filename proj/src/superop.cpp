#include "prodsys/superop.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace prodsys {

namespace {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

SuperOperator::SuperOperator(Algebra alg, CMatrix matrix) : alg_(std::move(alg)), m_(std::move(matrix)) {
  if (m_.rows() != alg_.dim() || m_.cols() != alg_.dim())
    throw DimensionError("superoperator matrix must be D×D");
}

SuperOperator SuperOperator::identity(const Algebra& alg) {
  return {alg, CMatrix::Identity(alg.dim(), alg.dim())};
}

SuperOperator SuperOperator::zero(const Algebra& alg) { return {alg, CMatrix::Zero(alg.dim(), alg.dim())}; }

SuperOperator SuperOperator::from_map(const Algebra& alg,
                                      const std::function<AlgebraElement(const AlgebraElement&)>& map) {
  CMatrix m(alg.dim(), alg.dim());
  for (int p = 0; p < alg.dim(); ++p) m.col(p) = map(AlgebraElement::unit(alg, p)).coords();
  return {alg, std::move(m)};
}

SuperOperator SuperOperator::sandwich(const AlgebraElement& x, const AlgebraElement& y) {
  return from_map(x.algebra(), [&](const AlgebraElement& b) { return x * b * y; });
}

AlgebraElement SuperOperator::operator()(const AlgebraElement& b) const {
  if (b.algebra() != alg_) throw DimensionError("superoperator applied to element of another algebra");
  return AlgebraElement::from_coords(alg_, m_ * b.coords());
}

SuperOperator SuperOperator::conjugate() const {
  return from_map(alg_, [this](const AlgebraElement& b) { return (*this)(b.adjoint()).adjoint(); });
}

bool SuperOperator::is_hermiticity_preserving(double tol) const {
  return distance(*this, conjugate()) <= tol * std::max(1.0, norm());
}

double SuperOperator::norm() const { return spectral_norm(m_); }

SuperOperator& SuperOperator::operator+=(const SuperOperator& rhs) {
  if (rhs.alg_ != alg_) throw DimensionError("superoperators over different algebras");
  m_ += rhs.m_;
  return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& rhs) {
  if (rhs.alg_ != alg_) throw DimensionError("superoperators over different algebras");
  m_ -= rhs.m_;
  return *this;
}

SuperOperator& SuperOperator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

SuperOperator operator*(const SuperOperator& s, const SuperOperator& t) {
  if (s.alg_ != t.alg_) throw DimensionError("superoperators over different algebras");
  return {s.alg_, s.m_ * t.m_};
}

SuperOperator superop_exp(const SuperOperator& generator, double t) {
  if (!std::isfinite(t) || !generator.matrix().allFinite())
    throw PreconditionError("superop_exp: non-finite input");
  if (t == 0.0) return SuperOperator::identity(generator.algebra());
  const CMatrix scaled = t * generator.matrix();
  return {generator.algebra(), scaled.exp()};
}

// ---------------------------------------------------------------------------

BMatrix::BMatrix(const Algebra& alg, int rows, int cols) : rows_(rows), cols_(cols), sizes_(alg.block_sizes()) {
  if (rows < 0 || cols < 0) throw DimensionError("negative B-matrix shape");
  for (int d : sizes_) blocks_.push_back(CMatrix::Zero(rows * d, cols * d));
}

BMatrix::BMatrix(int rows, int cols, std::vector<CMatrix> blocks)
    : rows_(rows), cols_(cols), blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw DimensionError("B-matrix needs at least one block");
  for (const auto& b : blocks_) {
    // A 0×0 block cannot reveal d; callers with empty shapes use the Algebra constructor.
    if (rows > 0 && b.rows() % rows != 0) throw DimensionError("B-matrix block shape mismatch");
    const int d = rows > 0 ? static_cast<int>(b.rows() / rows) : static_cast<int>(b.cols() / std::max(cols, 1));
    if (b.rows() != rows * d || b.cols() != cols * d) throw DimensionError("B-matrix block shape mismatch");
    sizes_.push_back(d);
  }
}

BMatrix BMatrix::identity(const Algebra& alg, int k) {
  BMatrix m(alg, k, k);
  for (auto& b : m.blocks_) b.setIdentity();
  return m;
}

BMatrix BMatrix::scalar(const Algebra& alg, const CMatrix& s) {
  BMatrix m(alg, static_cast<int>(s.rows()), static_cast<int>(s.cols()));
  for (int l = 0; l < m.num_blocks(); ++l) {
    const int d = alg.block_size(l);
    m.blocks_[static_cast<std::size_t>(l)] = Eigen::kroneckerProduct(s, CMatrix::Identity(d, d)).eval();
  }
  return m;
}

BMatrix BMatrix::diagonal(const AlgebraElement& a, int k) {
  const Algebra alg = a.algebra();
  BMatrix m(alg, k, k);
  for (int l = 0; l < m.num_blocks(); ++l)
    m.blocks_[static_cast<std::size_t>(l)] = Eigen::kroneckerProduct(CMatrix::Identity(k, k), a.block(l)).eval();
  return m;
}

Algebra BMatrix::algebra() const { return Algebra(sizes_); }

AlgebraElement BMatrix::entry(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("B-matrix entry out of range");
  std::vector<CMatrix> e;
  e.reserve(blocks_.size());
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const int d = sizes_[l];
    e.push_back(blocks_[l].block(i * d, j * d, d, d));
  }
  return AlgebraElement(std::move(e));
}

void BMatrix::set_entry(int i, int j, const AlgebraElement& a) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("B-matrix entry out of range");
  if (a.num_blocks() != num_blocks()) throw DimensionError("entry over a different algebra");
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const int d = sizes_[l];
    if (a.block(static_cast<int>(l)).rows() != d) throw DimensionError("entry over a different algebra");
    blocks_[l].block(i * d, j * d, d, d) = a.block(static_cast<int>(l));
  }
}

BMatrix BMatrix::adjoint() const {
  BMatrix m = *this;
  std::swap(m.rows_, m.cols_);
  for (auto& b : m.blocks_) b = b.adjoint().eval();
  return m;
}

double BMatrix::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, spectral_norm(b));
  return n;
}

bool BMatrix::same_shape(const BMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && sizes_ == other.sizes_;
}

BMatrix& BMatrix::operator+=(const BMatrix& rhs) {
  if (!same_shape(rhs)) throw DimensionError("B-matrix shape mismatch");
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] += rhs.blocks_[l];
  return *this;
}

BMatrix& BMatrix::operator-=(const BMatrix& rhs) {
  if (!same_shape(rhs)) throw DimensionError("B-matrix shape mismatch");
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] -= rhs.blocks_[l];
  return *this;
}

BMatrix& BMatrix::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

BMatrix operator*(const BMatrix& a, const BMatrix& b) {
  if (a.cols_ != b.rows_ || a.sizes_ != b.sizes_) throw DimensionError("B-matrix product shape mismatch");
  BMatrix m;
  m.rows_ = a.rows_;
  m.cols_ = b.cols_;
  m.sizes_ = a.sizes_;
  m.blocks_.reserve(a.blocks_.size());
  for (std::size_t l = 0; l < a.blocks_.size(); ++l) m.blocks_.push_back(a.blocks_[l] * b.blocks_[l]);
  return m;
}

double min_relative_eigenvalue(const BMatrix& hermitian) {
  double scale = 0.0;
  double lowest = 0.0;
  for (int l = 0; l < hermitian.num_blocks(); ++l) {
    const CMatrix& b = hermitian.block(l);
    if (b.size() == 0) continue;
    const CMatrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    scale = std::max({scale, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
    lowest = std::min(lowest, ev(0));
  }
  return scale == 0.0 ? 0.0 : lowest / scale;
}

bool is_psd(const BMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("is_psd: B-matrix must be square");
  if (distance(m, m.adjoint()) > tol * std::max(1.0, m.norm()))
    throw SymmetryError("is_psd: matrix is not Hermitian");
  return min_relative_eigenvalue(m) >= -tol;
}

BMatrix choi_matrix(const SuperOperator& t) {
  const Algebra& alg = t.algebra();
  const int dim = alg.dim();
  BMatrix c(alg, dim, dim);
  for (int p = 0; p < dim; ++p) {
    const auto up = AlgebraElement::unit(alg, p).adjoint();
    for (int q = 0; q < dim; ++q) c.set_entry(p, q, t(up * AlgebraElement::unit(alg, q)));
  }
  return c;
}

bool is_completely_positive(const SuperOperator& t, double tol) {
  if (!t.is_hermiticity_preserving(std::max(tol, 1e-12)))
    throw SymmetryError("is_completely_positive: map is not hermiticity preserving");
  return is_psd(choi_matrix(t), tol);
}

}  // namespace prodsys
