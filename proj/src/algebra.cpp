#include "prodsys/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace prodsys {

Algebra::Algebra(std::vector<int> block_sizes) : sizes_(std::move(block_sizes)) {
  if (sizes_.empty()) throw DimensionError("algebra needs at least one block");
  offsets_.reserve(sizes_.size());
  for (int d : sizes_) {
    if (d <= 0) throw DimensionError("block sizes must be positive");
    offsets_.push_back(dim_);
    dim_ += d * d;
  }
}

Algebra Algebra::matrix(int d) { return Algebra({d}); }

int Algebra::matrix_size() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

Algebra::Unit Algebra::unit(int p) const {
  if (p < 0 || p >= dim_) throw DimensionError("matrix unit index out of range");
  int l = num_blocks() - 1;
  while (offsets_[static_cast<std::size_t>(l)] > p) --l;
  const int d = block_size(l);
  const int local = p - offset(l);
  return {l, local / d, local % d};
}

int Algebra::index(int block, int row, int col) const {
  return offset(block) + row * block_size(block) + col;
}

std::string Algebra::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sizes_.size(); ++i) os << (i ? "+" : "") << "M" << sizes_[i];
  return os.str();
}

AlgebraElement::AlgebraElement(std::vector<CMatrix> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.rows() != b.cols() || b.rows() == 0) throw DimensionError("algebra blocks must be square");
  }
}

AlgebraElement AlgebraElement::zero(const Algebra& alg) {
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(CMatrix::Zero(d, d));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const Algebra& alg) {
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(CMatrix::Identity(d, d));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::unit(const Algebra& alg, int p) {
  auto u = alg.unit(p);
  auto x = zero(alg);
  x.block(u.block)(u.row, u.col) = 1.0;
  return x;
}

AlgebraElement AlgebraElement::from_coords(const Algebra& alg, const CVector& coords) {
  if (coords.size() != alg.dim()) throw DimensionError("coordinate vector has wrong length");
  auto x = zero(alg);
  for (int l = 0; l < alg.num_blocks(); ++l) {
    const int d = alg.block_size(l);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) x.block(l)(r, c) = coords(alg.index(l, r, c));
  }
  return x;
}

AlgebraElement AlgebraElement::central(const Algebra& alg, const std::vector<Complex>& per_block) {
  if (static_cast<int>(per_block.size()) != alg.num_blocks())
    throw DimensionError("one scalar per block expected");
  auto x = identity(alg);
  for (int l = 0; l < alg.num_blocks(); ++l) x.block(l) *= per_block[static_cast<std::size_t>(l)];
  return x;
}

Algebra AlgebraElement::algebra() const {
  std::vector<int> sizes;
  sizes.reserve(blocks_.size());
  for (const auto& b : blocks_) sizes.push_back(static_cast<int>(b.rows()));
  return Algebra(std::move(sizes));
}

CVector AlgebraElement::coords() const {
  Eigen::Index total = 0;
  for (const auto& b : blocks_) total += b.size();
  CVector v(total);
  Eigen::Index k = 0;
  for (const auto& b : blocks_)
    for (Eigen::Index r = 0; r < b.rows(); ++r)
      for (Eigen::Index c = 0; c < b.cols(); ++c) v(k++) = b(r, c);
  return v;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<CMatrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(std::move(blocks));
}

namespace {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

void require_same(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.same_algebra(b)) throw DimensionError("algebra elements over different algebras");
}

}  // namespace

double AlgebraElement::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, spectral_norm(b));
  return n;
}

bool AlgebraElement::is_finite() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const CMatrix& b) { return b.allFinite(); });
}

bool AlgebraElement::same_algebra(const AlgebraElement& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t l = 0; l < blocks_.size(); ++l)
    if (blocks_[l].rows() != other.blocks_[l].rows()) return false;
  return true;
}

AlgebraElement AlgebraElement::exp(double t) const {
  std::vector<CMatrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.rows() == 1) {
      blocks.push_back(CMatrix::Constant(1, 1, std::exp(t * b(0, 0))));
      continue;
    }
    blocks.push_back((t * b).exp());
  }
  return AlgebraElement(std::move(blocks));
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require_same(*this, rhs);
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] += rhs.blocks_[l];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require_same(*this, rhs);
  for (std::size_t l = 0; l < blocks_.size(); ++l) blocks_[l] -= rhs.blocks_[l];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b);
  std::vector<CMatrix> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t l = 0; l < a.blocks_.size(); ++l) blocks.push_back(a.blocks_[l] * b.blocks_[l]);
  return AlgebraElement(std::move(blocks));
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) { return x * y - y * x; }

bool is_central(const AlgebraElement& x, double tol) {
  const Algebra alg = x.algebra();
  const double scale = std::max(1.0, x.norm());
  for (int p = 0; p < alg.dim(); ++p) {
    if (commutator(x, AlgebraElement::unit(alg, p)).norm() > tol * scale) return false;
  }
  return true;
}

double min_relative_eigenvalue(const CMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (scale == 0.0) return 0.0;
  return ev(0) / scale;
}

bool is_positive_element(const AlgebraElement& b, double tol) {
  const double nrm = b.norm();
  if (distance(b, b.adjoint()) > tol * std::max(1.0, nrm))
    throw SymmetryError("is_positive_element: element is not self-adjoint");
  for (const auto& blk : b.blocks()) {
    const CMatrix h = 0.5 * (blk + blk.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -tol * nrm) return false;
  }
  return true;
}

}  // namespace prodsys
