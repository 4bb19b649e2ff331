#include "prodsys/random.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

namespace prodsys {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

CMatrix random_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.cnormal();
  return m;
}

AlgebraElement random_element(const Algebra& alg, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(random_matrix(rng, d, d));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement random_element(const Algebra& alg, Rng& rng, double max_norm) {
  auto x = random_element(alg, rng);
  const double target = max_norm * (1.0 - rng.uniform());
  const double n = x.norm();
  return n > 0.0 ? x * Complex(target / n) : x;
}

AlgebraElement random_hermitian(const Algebra& alg, Rng& rng) {
  const auto x = random_element(alg, rng);
  return (x + x.adjoint()) * Complex(0.5);
}

namespace {

CMatrix haar_unitary(Rng& rng, int n) {
  const CMatrix g = random_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace

AlgebraElement random_unitary(const Algebra& alg, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(haar_unitary(rng, d));
  return AlgebraElement(std::move(blocks));
}

BMatrix random_unitary(const Algebra& alg, int k, Rng& rng) {
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(haar_unitary(rng, k * d));
  return {k, k, std::move(blocks)};
}

Bimodule random_bimodule(const Algebra& alg, int rank, Rng& rng, int dropped) {
  if (dropped < 0 || dropped > rank) throw PreconditionError("random_bimodule: bad number of dropped slots");
  const BMatrix u = random_unitary(alg, rank, rng);
  CMatrix keep = CMatrix::Zero(rank, rank);
  for (int i = 0; i < rank - dropped; ++i) keep(i, i) = 1.0;
  std::vector<BMatrix> pi;
  for (int p = 0; p < alg.dim(); ++p) {
    const auto up = AlgebraElement::unit(alg, p);
    BMatrix m(alg, rank, rank);
    for (int l = 0; l < alg.num_blocks(); ++l) m.block(l) = Eigen::kroneckerProduct(keep, up.block(l)).eval();
    pi.push_back(u * m * u.adjoint());
  }
  return {alg, rank, std::move(pi)};
}

ModuleVector random_vector(const Bimodule& f, Rng& rng, double max_norm) {
  const Algebra& alg = f.algebra();
  if (f.rank() == 0) return ModuleVector::zero(alg, 0);
  std::vector<CMatrix> blocks;
  for (int d : alg.block_sizes()) blocks.push_back(random_matrix(rng, f.rank() * d, d));
  const ModuleVector x = f.project(ModuleVector(BMatrix(f.rank(), 1, std::move(blocks))));
  const double n = x.norm();
  const double target = max_norm * (1.0 - rng.uniform());
  return n > 0.0 ? x * Complex(target / n) : x;
}

}  // namespace prodsys
