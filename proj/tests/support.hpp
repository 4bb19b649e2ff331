#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "prodsys/random.hpp"
#include "prodsys/superop.hpp"

namespace prodsys::testing {

inline const Algebra kScalars = Algebra::scalars();
inline const Algebra kM2 = Algebra::matrix(2);
inline const Algebra kCplusM2 = Algebra({1, 2});

/// e^{iA} for Hermitian A via its eigendecomposition.
inline CMatrix expi_hermitian(const CMatrix& a, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  CVector phases(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) phases(i) = std::polar(1.0, t * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// b ↦ Σ_k x_k* b x_k.
inline SuperOperator kraus_map(const std::vector<AlgebraElement>& xs) {
  SuperOperator t = SuperOperator::zero(xs.front().algebra());
  for (const auto& x : xs) t += SuperOperator::conjugation(x);
  return t;
}

inline SuperOperator random_superop(const Algebra& alg, Rng& rng, double norm) {
  const CMatrix m = random_matrix(rng, alg.dim(), alg.dim());
  Eigen::JacobiSVD<CMatrix> svd(m);
  return {alg, m * (norm / svd.singularValues()(0))};
}

inline double rel(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace prodsys::testing
