#include "prodsys/spatial_product.hpp"

#include <algorithm>
#include <cmath>

namespace prodsys {

ProductSystemPair build_product(const Bimodule& f1, const Bimodule& f2) {
  return {f1, f2, direct_sum(f1, f2)};
}

namespace {

void check_side(int side) {
  if (side != 1 && side != 2) throw PreconditionError("side must be 1 or 2");
}

}  // namespace

UnitParams embed_unit(const ProductSystemPair& pair, int side, const UnitParams& p) {
  check_side(side);
  const Bimodule& f = side == 1 ? pair.factor1 : pair.factor2;
  f.require_member(p.zeta);
  return {p.beta, side == 1 ? pair.sum.embed1(p.zeta) : pair.sum.embed2(p.zeta)};
}

UnitParams project_unit(const ProductSystemPair& pair, int side, const UnitParams& p) {
  check_side(side);
  pair.product().require_member(p.zeta);
  return {p.beta, side == 1 ? pair.sum.part1(p.zeta) : pair.sum.part2(p.zeta)};
}

UnitParams reassemble(const ProductSystemPair& pair, const UnitParams& e1, const UnitParams& e2,
                      const AlgebraElement& drift) {
  const UnitParams d{drift, ModuleVector::zero(drift.algebra(), pair.product().rank())};
  return trotter_product(trotter_product(embed_unit(pair, 1, e1), embed_unit(pair, 2, e2)), d);
}

double decompose_residual(const ProductSystemPair& pair, const UnitParams& p) {
  const auto q = reassemble(pair, project_unit(pair, 1, p), project_unit(pair, 2, p), -p.beta);
  return distance(q, p);
}

bool decompose_check(const ProductSystemPair& pair, const UnitParams& p, double tol) {
  return decompose_residual(pair, p) <= tol * std::max(1.0, std::max(p.beta.norm(), p.zeta.norm()));
}

std::pair<UnitParams, UnitParams> exponential_factors(const ProductSystemPair& pair, const UnitParams& p) {
  return {exponentialize(project_unit(pair, 1, p)).exp_part, exponentialize(project_unit(pair, 2, p)).exp_part};
}

MorphismSum morphism_sum(const ProductSystemPair& pair, const Bimodule& source, const BMatrix& a1,
                         const BMatrix& a2, double tol) {
  if (!is_bilinear(source, pair.factor1, a1, tol) || !is_bilinear(source, pair.factor2, a2, tol))
    throw PreconditionError("morphism_sum: components must be bilinear");
  return {pair.sum.iota1 * a1 + pair.sum.iota2 * a2, a1.adjoint() * pair.sum.proj1 + a2.adjoint() * pair.sum.proj2};
}

double scalar_tensor_residual(const ProductSystemPair& pair, const ModuleVector& z1, const ModuleVector& z1p,
                              const ModuleVector& z2, const ModuleVector& z2p, double t) {
  const Algebra& alg = pair.product().algebra();
  if (!(alg == Algebra::scalars())) throw DimensionError("scalar_tensor_check: algebra must be ℂ");
  const auto one = AlgebraElement::identity(alg);
  const auto zero = AlgebraElement::zero(alg);
  auto exp_unit = [&](const ModuleVector& z) { return UnitParams{zero, z}; };

  const auto lhs = unit_inner(pair.product(), exp_unit(pair.sum.embed1(z1) + pair.sum.embed2(z2)),
                              exp_unit(pair.sum.embed1(z1p) + pair.sum.embed2(z2p)), t, one);
  const auto r1 = unit_inner(pair.factor1, exp_unit(z1), exp_unit(z1p), t, one);
  const auto r2 = unit_inner(pair.factor2, exp_unit(z2), exp_unit(z2p), t, one);
  const Complex l = lhs.block(0)(0, 0);
  const Complex r = r1.block(0)(0, 0) * r2.block(0)(0, 0);
  double res = std::abs(l - r) / std::max(1.0, std::abs(l));

  const auto vac = unit_inner(pair.product(), UnitParams::vacuum(pair.product()), UnitParams::vacuum(pair.product()),
                              t, one);
  const auto v1 = unit_inner(pair.factor1, UnitParams::vacuum(pair.factor1), UnitParams::vacuum(pair.factor1), t, one);
  const auto v2 = unit_inner(pair.factor2, UnitParams::vacuum(pair.factor2), UnitParams::vacuum(pair.factor2), t, one);
  res = std::max(res, std::abs(vac.block(0)(0, 0) - v1.block(0)(0, 0) * v2.block(0)(0, 0)));
  return res;
}

bool scalar_tensor_check(const ProductSystemPair& pair, const ModuleVector& z1, const ModuleVector& z1p,
                         const ModuleVector& z2, const ModuleVector& z2p, double t, double tol) {
  return scalar_tensor_residual(pair, z1, z1p, z2, z2p, t) <= tol;
}

}  // namespace prodsys
