#include "prodsys/bimodule.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace prodsys {

ModuleVector::ModuleVector(BMatrix column) : m_(std::move(column)) {
  if (m_.cols() != 1) throw DimensionError("module vector must be a single column");
}

ModuleVector ModuleVector::zero(const Algebra& alg, int rank) { return ModuleVector(BMatrix(alg, rank, 1)); }

ModuleVector ModuleVector::basis(const Algebra& alg, int rank, int i, const AlgebraElement& b) {
  BMatrix m(alg, rank, 1);
  m.set_entry(i, 0, b);
  return ModuleVector(std::move(m));
}

ModuleVector ModuleVector::from_entries(const std::vector<AlgebraElement>& entries) {
  if (entries.empty()) throw DimensionError("from_entries: use zero() for rank 0");
  const Algebra alg = entries.front().algebra();
  BMatrix m(alg, static_cast<int>(entries.size()), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) m.set_entry(static_cast<int>(i), 0, entries[i]);
  return ModuleVector(std::move(m));
}

ModuleVector ModuleVector::from_coords(const Algebra& alg, int rank, const CVector& coords) {
  const int dim = alg.dim();
  if (coords.size() != static_cast<Eigen::Index>(rank) * dim) throw DimensionError("module coordinates have wrong length");
  BMatrix m(alg, rank, 1);
  for (int i = 0; i < rank; ++i) m.set_entry(i, 0, AlgebraElement::from_coords(alg, coords.segment(i * dim, dim)));
  return ModuleVector(std::move(m));
}

std::vector<AlgebraElement> ModuleVector::entries() const {
  std::vector<AlgebraElement> out;
  out.reserve(static_cast<std::size_t>(rank()));
  for (int i = 0; i < rank(); ++i) out.push_back(entry(i));
  return out;
}

CVector ModuleVector::coords() const {
  const int dim = algebra().dim();
  CVector v(static_cast<Eigen::Index>(rank()) * dim);
  for (int i = 0; i < rank(); ++i) v.segment(i * dim, dim) = entry(i).coords();
  return v;
}

double ModuleVector::norm() const { return std::sqrt(inner(*this, *this).norm()); }

ModuleVector& ModuleVector::operator+=(const ModuleVector& rhs) {
  m_ += rhs.m_;
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& rhs) {
  m_ -= rhs.m_;
  return *this;
}

ModuleVector& ModuleVector::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

ModuleVector operator*(const ModuleVector& x, const AlgebraElement& b) {
  BMatrix r(b.algebra(), 1, 1);
  r.set_entry(0, 0, b);
  return ModuleVector(x.m_ * r);
}

ModuleVector operator*(const BMatrix& a, const ModuleVector& x) { return ModuleVector(a * x.m_); }

AlgebraElement inner(const ModuleVector& x, const ModuleVector& y) {
  if (!x.column().same_shape(y.column())) throw DimensionError("inner product of vectors from different modules");
  return (x.column().adjoint() * y.column()).entry(0, 0);
}

BMatrix gram_matrix(const std::vector<ModuleVector>& family) {
  if (family.empty()) throw DimensionError("gram_matrix: empty family");
  const Algebra alg = family.front().algebra();
  const int n = static_cast<int>(family.size());
  BMatrix g(alg, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.set_entry(i, j, inner(family[static_cast<std::size_t>(i)], family[static_cast<std::size_t>(j)]));
  return g;
}

// ---------------------------------------------------------------------------

Bimodule::Bimodule(Algebra alg, int rank, std::vector<BMatrix> action)
    : alg_(std::move(alg)), rank_(rank), pi_(std::move(action)) {
  if (rank_ < 0) throw DimensionError("negative module rank");
  if (static_cast<int>(pi_.size()) != alg_.dim()) throw DimensionError("left action needs one matrix per matrix unit");
  for (const auto& m : pi_) {
    if (m.rows() != rank_ || m.cols() != rank_ || !(m.algebra() == alg_))
      throw DimensionError("left action matrix has wrong shape");
  }
  proj_ = BMatrix(alg_, rank_, rank_);
  for (int l = 0; l < alg_.num_blocks(); ++l)
    for (int i = 0; i < alg_.block_size(l); ++i) proj_ += pi_[static_cast<std::size_t>(alg_.index(l, i, i))];
}

Bimodule Bimodule::free(const Algebra& alg, int rank) {
  std::vector<BMatrix> pi;
  pi.reserve(static_cast<std::size_t>(alg.dim()));
  for (int p = 0; p < alg.dim(); ++p) pi.push_back(BMatrix::diagonal(AlgebraElement::unit(alg, p), rank));
  return {alg, rank, std::move(pi)};
}

BMatrix Bimodule::left(const AlgebraElement& a) const {
  const CVector c = a.coords();
  BMatrix m(alg_, rank_, rank_);
  for (int p = 0; p < alg_.dim(); ++p)
    if (c(p) != Complex(0.0)) m += pi_[static_cast<std::size_t>(p)] * c(p);
  return m;
}

int Bimodule::flat_rank() const {
  int r = 0;
  for (int l = 0; l < proj_.num_blocks(); ++l) {
    const CMatrix& p = proj_.block(l);
    if (p.size() == 0) continue;
    // P is a projection: its rank is its trace.
    r += static_cast<int>(std::lround(p.trace().real()));
  }
  return r;
}

ModuleVector Bimodule::act(const AlgebraElement& a, const ModuleVector& x) const {
  require_member(x);
  return left(a) * x;
}

bool Bimodule::contains(const ModuleVector& x, double tol) const {
  require_member(x);
  return distance(project(x), x) <= tol * std::max(1.0, x.column().norm());
}

void Bimodule::require_member(const ModuleVector& x) const {
  if (x.rank() != rank_ || !(x.algebra() == alg_)) throw DimensionError("vector does not belong to this module");
}

double Bimodule::invariant_residual() const {
  double r = std::max(distance(proj_ * proj_, proj_), distance(proj_.adjoint(), proj_));
  const int dim = alg_.dim();
  for (int p = 0; p < dim; ++p) {
    const auto up = AlgebraElement::unit(alg_, p);
    r = std::max(r, distance(left(up.adjoint()), pi_[static_cast<std::size_t>(p)].adjoint()));
    for (int q = 0; q < dim; ++q) {
      const auto uq = AlgebraElement::unit(alg_, q);
      r = std::max(r, distance(left(up * uq), pi_[static_cast<std::size_t>(p)] * pi_[static_cast<std::size_t>(q)]));
    }
  }
  return r;
}

CMatrix Bimodule::left_coords(const AlgebraElement& a) const {
  const int dim = alg_.dim();
  const int n = rank_ * dim;
  const BMatrix la = left(a);
  CMatrix m(n, n);
  for (int c = 0; c < n; ++c) {
    CVector e = CVector::Zero(n);
    e(c) = 1.0;
    m.col(c) = (la * ModuleVector::from_coords(alg_, rank_, e)).coords();
  }
  return m;
}

// ---------------------------------------------------------------------------

DirectSum direct_sum(const Bimodule& f, const Bimodule& g) {
  if (!(f.algebra() == g.algebra())) throw DimensionError("direct_sum: modules over different algebras");
  const Algebra& alg = f.algebra();
  const int kf = f.rank();
  const int kg = g.rank();
  const int k = kf + kg;

  std::vector<BMatrix> pi;
  pi.reserve(static_cast<std::size_t>(alg.dim()));
  for (int p = 0; p < alg.dim(); ++p) {
    BMatrix m(alg, k, k);
    for (int l = 0; l < alg.num_blocks(); ++l) {
      const int d = alg.block_size(l);
      m.block(l).topLeftCorner(kf * d, kf * d) = f.action(p).block(l);
      m.block(l).bottomRightCorner(kg * d, kg * d) = g.action(p).block(l);
    }
    pi.push_back(std::move(m));
  }

  CMatrix i1 = CMatrix::Zero(k, kf);
  i1.topRows(kf).setIdentity();
  CMatrix i2 = CMatrix::Zero(k, kg);
  i2.bottomRows(kg).setIdentity();
  return DirectSum{Bimodule(alg, k, std::move(pi)), BMatrix::scalar(alg, i1), BMatrix::scalar(alg, i2),
                   BMatrix::scalar(alg, i1.adjoint()), BMatrix::scalar(alg, i2.adjoint())};
}

namespace {

// [π_G(m_ij)]_{ij} for a k×k B-matrix m.
BMatrix amplify(const Bimodule& g, const BMatrix& m) {
  const Algebra& alg = g.algebra();
  const int k = m.rows();
  const int kg = g.rank();
  BMatrix out(alg, m.rows() * kg, m.cols() * kg);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const BMatrix e = g.left(m.entry(i, j));
      for (int l = 0; l < alg.num_blocks(); ++l) {
        const int d = alg.block_size(l);
        out.block(l).block(i * kg * d, j * kg * d, kg * d, kg * d) = e.block(l);
      }
    }
  }
  return out;
}

}  // namespace

Bimodule tensor_over_B(const Bimodule& f, const Bimodule& g) {
  if (!(f.algebra() == g.algebra())) throw DimensionError("tensor_over_B: modules over different algebras");
  std::vector<BMatrix> pi;
  pi.reserve(f.action().size());
  for (const auto& m : f.action()) pi.push_back(amplify(g, m));
  return {f.algebra(), f.rank() * g.rank(), std::move(pi)};
}

ModuleVector tensor_vectors(const Bimodule& g, const ModuleVector& x, const ModuleVector& y) {
  g.require_member(y);
  const Algebra& alg = g.algebra();
  const int kx = x.rank();
  const int kg = g.rank();
  BMatrix out(alg, kx * kg, 1);
  for (int i = 0; i < kx; ++i) {
    const ModuleVector part = g.left(x.entry(i)) * y;
    for (int l = 0; l < alg.num_blocks(); ++l) {
      const int d = alg.block_size(l);
      out.block(l).block(i * kg * d, 0, kg * d, d) = part.column().block(l);
    }
  }
  return ModuleVector(std::move(out));
}

TensorPowers::TensorPowers(Bimodule f) {
  const Algebra alg = f.algebra();
  powers_.push_back(Bimodule::free(alg, 1));
  powers_.push_back(std::move(f));
}

const Bimodule& TensorPowers::power(int n) {
  if (n < 0) throw DimensionError("negative tensor power");
  while (static_cast<int>(powers_.size()) <= n) powers_.push_back(tensor_over_B(powers_[1], powers_.back()));
  return powers_[static_cast<std::size_t>(n)];
}

ModuleVector TensorPowers::tensor(const ModuleVector& x, int b, const ModuleVector& y) {
  return tensor_vectors(power(b), x, y);
}

// ---------------------------------------------------------------------------

std::vector<ModuleVector> center(const Bimodule& f, double tol) {
  const Algebra& alg = f.algebra();
  const int dim = alg.dim();
  const int n = f.rank() * dim;
  if (n == 0) return {};

  // Stack x ↦ π(u_p)x − x·u_p for every p, and x ↦ (1 − P)x.
  CMatrix sys(static_cast<Eigen::Index>(dim + 1) * n, n);
  for (int p = 0; p < dim; ++p) {
    const auto up = AlgebraElement::unit(alg, p);
    const CMatrix lp = f.left_coords(up);
    for (int c = 0; c < n; ++c) {
      CVector e = CVector::Zero(n);
      e(c) = 1.0;
      const auto x = ModuleVector::from_coords(alg, f.rank(), e);
      sys.block(static_cast<Eigen::Index>(p) * n, c, n, 1) = lp.col(c) - (x * up).coords();
    }
  }
  sys.bottomRows(n) = CMatrix::Identity(n, n) - f.left_coords(AlgebraElement::identity(alg));

  Eigen::JacobiSVD<CMatrix> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<ModuleVector> basis;
  for (int c = 0; c < n; ++c) {
    const double s = c < sv.size() ? sv(c) : 0.0;
    if (s <= cutoff) basis.push_back(ModuleVector::from_coords(alg, f.rank(), svd.matrixV().col(c)));
  }
  return basis;
}

bool is_central_vector(const Bimodule& f, const ModuleVector& x, double tol) {
  if (!f.contains(x, tol)) return false;
  const Algebra& alg = f.algebra();
  const double scale = std::max(1.0, x.column().norm());
  for (int p = 0; p < alg.dim(); ++p) {
    const auto up = AlgebraElement::unit(alg, p);
    if (distance(f.act(up, x), x * up) > tol * scale) return false;
  }
  return true;
}

}  // namespace prodsys
