#include "prodsys/cpd_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace prodsys {

CPDKernel::CPDKernel(std::vector<std::string> labels, std::vector<SuperOperator> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)), alg_(Algebra::scalars()) {
  if (labels_.empty()) throw DimensionError("kernel needs at least one label");
  if (entries_.size() != labels_.size() * labels_.size()) throw DimensionError("kernel needs |S|² entries");
  std::vector<std::string> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DimensionError("kernel labels must be distinct");
  alg_ = entries_.front().algebra();
  for (const auto& e : entries_)
    if (!(e.algebra() == alg_)) throw DimensionError("kernel entries over different algebras");
}

CPDKernel CPDKernel::from_vectors(const Bimodule& f, std::vector<std::string> labels,
                                  const std::vector<ModuleVector>& vectors) {
  if (labels.size() != vectors.size()) throw DimensionError("one vector per label expected");
  std::vector<SuperOperator> entries;
  for (const auto& x : vectors) {
    for (const auto& y : vectors) {
      entries.push_back(SuperOperator::from_map(
          f.algebra(), [&](const AlgebraElement& b) { return inner(x, f.act(b, y)); }));
    }
  }
  return {std::move(labels), std::move(entries)};
}

int CPDKernel::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw PreconditionError("unknown kernel label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

double CPDKernel::symmetry_residual() const {
  double r = 0.0;
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      for (int p = 0; p < alg_.dim(); ++p) {
        const auto up = AlgebraElement::unit(alg_, p);
        r = std::max(r, distance(at(i, j)(up).adjoint(), at(j, i)(up.adjoint())));
      }
    }
  }
  return r;
}

BMatrix CPDKernel::gram() const {
  const int dim = alg_.dim();
  const int n = size() * dim;
  BMatrix g(alg_, n, n);
  std::vector<AlgebraElement> units;
  for (int p = 0; p < dim; ++p) units.push_back(AlgebraElement::unit(alg_, p));
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q)
          g.set_entry(i * dim + p, j * dim + q, at(i, j)(units[static_cast<std::size_t>(p)].adjoint() *
                                                         units[static_cast<std::size_t>(q)]));
  return g;
}

double distance(const CPDKernel& a, const CPDKernel& b) {
  if (a.labels() != b.labels()) throw DimensionError("kernels on different label sets");
  double r = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) r = std::max(r, distance(a.at(i, j), b.at(i, j)));
  return r;
}

namespace {

void require_symmetric(const CPDKernel& k) {
  double scale = 1.0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j) scale = std::max(scale, k.at(i, j).norm());
  if (k.symmetry_residual() > 1e-12 * scale) throw SymmetryError("kernel is not Hermitian: K(b)* != K'(b*)");
}

}  // namespace

bool is_cpd(const CPDKernel& k, double tol) {
  require_symmetric(k);
  return is_psd(k.gram(), tol);
}

Kolmogorov kolmogorov(const CPDKernel& k, double tol) {
  if (!is_cpd(k, tol)) throw PreconditionError("kolmogorov: kernel is not completely positive definite");
  const Algebra& alg = k.algebra();
  const int dim = alg.dim();
  const int s = k.size();
  const int n = s * dim;
  const BMatrix m = k.gram();

  // Left multiplication on coordinates: λ(u_p) e_q = coords(u_p u_q).
  std::vector<CMatrix> lambda;
  for (int p = 0; p < dim; ++p) {
    const auto up = AlgebraElement::unit(alg, p);
    CMatrix lp(dim, dim);
    for (int q = 0; q < dim; ++q) lp.col(q) = (up * AlgebraElement::unit(alg, q)).coords();
    lambda.push_back(std::move(lp));
  }

  BMatrix root(alg, n, n);
  BMatrix root_pinv(alg, n, n);
  for (int l = 0; l < alg.num_blocks(); ++l) {
    const CMatrix& g = m.block(l);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (g + g.adjoint()));
    const auto& ev = es.eigenvalues();
    const double top = ev.size() ? std::max(0.0, ev(ev.size() - 1)) : 0.0;
    // Rank cutoff relative to the largest singular value of M.
    const double cut = kRankCutoff * top;
    Eigen::VectorXd r(ev.size());
    Eigen::VectorXd rinv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const bool keep = ev(i) > cut && ev(i) > 0.0;
      const double sv = keep ? std::sqrt(ev(i)) : 0.0;
      r(i) = keep ? sv : 0.0;
      rinv(i) = keep ? 1.0 / sv : 0.0;
    }
    const CMatrix& v = es.eigenvectors();
    root.block(l) = v * r.cast<Complex>().asDiagonal() * v.adjoint();
    root_pinv.block(l) = v * rinv.cast<Complex>().asDiagonal() * v.adjoint();
  }

  std::vector<BMatrix> pi;
  pi.reserve(static_cast<std::size_t>(dim));
  for (int p = 0; p < dim; ++p) {
    const CMatrix big = Eigen::kroneckerProduct(CMatrix::Identity(s, s), lambda[static_cast<std::size_t>(p)]).eval();
    pi.push_back(root * BMatrix::scalar(alg, big) * root_pinv);
  }
  Bimodule f(alg, n, std::move(pi));

  std::vector<ModuleVector> zeta;
  for (int i = 0; i < s; ++i) {
    // 1 ⊗ σ ⊗ 1 = Σ over diagonal units u_p of the symbol u_p ⊗ σ ⊗ 1.
    BMatrix c(alg, n, 1);
    for (int l = 0; l < alg.num_blocks(); ++l)
      for (int r = 0; r < alg.block_size(l); ++r) c.set_entry(i * dim + alg.index(l, r, r), 0, AlgebraElement::identity(alg));
    zeta.emplace_back(root * c);
  }
  return {std::move(f), std::move(zeta)};
}

CPDKernel semigroup_at(const CPDKernel& l, double t) {
  if (!(t >= 0.0)) throw PreconditionError("semigroup_at: t must be nonnegative");
  std::vector<SuperOperator> entries;
  for (int i = 0; i < l.size(); ++i)
    for (int j = 0; j < l.size(); ++j) entries.push_back(superop_exp(l.at(i, j), t));
  return {l.labels(), std::move(entries)};
}

CPDKernel compose(const CPDKernel& a, const CPDKernel& b) {
  if (a.labels() != b.labels()) throw DimensionError("compose: kernels on different label sets");
  std::vector<SuperOperator> entries;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j) entries.push_back(a.at(i, j) * b.at(i, j));
  return {a.labels(), std::move(entries)};
}

CESplit ce_split(const CPDKernel& l, const std::string& omega, double tol) {
  const Algebra& alg = l.algebra();
  const int w = l.index_of(omega);
  const auto one = AlgebraElement::identity(alg);

  std::vector<AlgebraElement> beta;
  for (int j = 0; j < l.size(); ++j) {
    const auto bj = l.at(w, j)(one);
    const double scale = std::max(1.0, l.at(w, j).norm());
    for (int p = 0; p < alg.dim(); ++p) {
      const auto up = AlgebraElement::unit(alg, p);
      if (distance(l.at(w, j)(up), up * bj) > tol * scale)
        throw PreconditionError("ce_split: reference label '" + omega + "' is not central");
    }
    beta.push_back(bj);
  }

  std::vector<SuperOperator> entries;
  for (int i = 0; i < l.size(); ++i) {
    for (int j = 0; j < l.size(); ++j) {
      const auto& bi = beta[static_cast<std::size_t>(i)];
      const auto& bj = beta[static_cast<std::size_t>(j)];
      entries.push_back(l.at(i, j) - SuperOperator::sandwich(bi.adjoint(), one) - SuperOperator::sandwich(one, bj));
    }
  }
  CPDKernel l0(l.labels(), std::move(entries));
  if (!is_cpd(l0))
    throw PreconditionError(
        "ce_split: L0 is not completely positive definite, so the generator is not a CE-generator "
        "(finite dimension cannot decide whether such a kernel arises from a product system)");
  return {std::move(beta), std::move(l0)};
}

CPDKernel ce_recombine(const CESplit& split) {
  const Algebra& alg = split.l0.algebra();
  const auto one = AlgebraElement::identity(alg);
  std::vector<SuperOperator> entries;
  const int s = split.l0.size();
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      entries.push_back(split.l0.at(i, j) +
                        SuperOperator::sandwich(split.beta[static_cast<std::size_t>(i)].adjoint(), one) +
                        SuperOperator::sandwich(one, split.beta[static_cast<std::size_t>(j)]));
  return {split.l0.labels(), std::move(entries)};
}

}  // namespace prodsys
