#include "prodsys/tof_units.hpp"

#include <algorithm>
#include <cmath>

#include "prodsys/kernels/simplex.hpp"

namespace prodsys {

UnitParams UnitParams::vacuum(const Bimodule& f) {
  return {AlgebraElement::zero(f.algebra()), ModuleVector::zero(f.algebra(), f.rank())};
}

double distance(const UnitParams& a, const UnitParams& b) {
  return std::max(distance(a.beta, b.beta), distance(a.zeta, b.zeta));
}

SuperOperator generator(const Bimodule& f, const UnitParams& p, const UnitParams& q) {
  f.require_member(p.zeta);
  f.require_member(q.zeta);
  const auto bp = p.beta.adjoint();
  return SuperOperator::from_map(f.algebra(), [&](const AlgebraElement& b) {
    return inner(p.zeta, f.act(b, q.zeta)) + bp * b + b * q.beta;
  });
}

AlgebraElement unit_inner(const Bimodule& f, const UnitParams& p, const UnitParams& q, double t,
                          const AlgebraElement& b) {
  if (!(t >= 0.0)) throw PreconditionError("unit_inner: t must be nonnegative");
  return superop_exp(generator(f, p, q), t)(b);
}

CPDKernel unit_kernel(const Bimodule& f, const std::vector<std::string>& labels,
                      const std::vector<UnitParams>& units) {
  if (labels.size() != units.size()) throw DimensionError("unit_kernel: one label per unit expected");
  std::vector<SuperOperator> entries;
  for (const auto& p : units)
    for (const auto& q : units) entries.push_back(generator(f, p, q));
  return {labels, std::move(entries)};
}

ModuleVector exponential_unit_component(TensorPowers& powers, const UnitParams& p, double t,
                                        const std::vector<double>& tuple) {
  const Bimodule& f = powers.base();
  f.require_member(p.zeta);
  const int n = static_cast<int>(tuple.size());
  for (int i = 0; i < n; ++i) {
    const double ti = tuple[static_cast<std::size_t>(i)];
    if (!(ti > 0.0 && ti < t)) throw PreconditionError("exponential_unit_component: tuple entry outside (0, t)");
    if (i > 0 && !(ti < tuple[static_cast<std::size_t>(i - 1)]))
      throw PreconditionError("exponential_unit_component: tuple must decrease strictly");
  }
  if (n == 0) return ModuleVector::from_entries({p.beta.exp(t)});

  auto factor = [&](double s) { return f.act(p.beta.exp(s), p.zeta); };
  // Build from the rightmost factor, which carries e^{t_1 β} on its right.
  const double t1 = tuple.back();
  const double right_gap = n >= 2 ? tuple[static_cast<std::size_t>(n - 2)] - t1 : t - t1;
  ModuleVector y = factor(right_gap) * p.beta.exp(t1);
  for (int k = n - 2; k >= 0; --k) {
    const double upper = k == 0 ? t : tuple[static_cast<std::size_t>(k - 1)];
    y = powers.tensor(factor(upper - tuple[static_cast<std::size_t>(k)]), n - 1 - k, y);
  }
  return y;
}

QuadratureResult quadrature_inner(const Bimodule& f, const UnitParams& p, const UnitParams& q, double t,
                                  const AlgebraElement& b, int n_max, double h, Exec exec) {
  if (n_max < 0 || !(h > 0.0) || !(t >= 0.0)) throw PreconditionError("quadrature_inner: need n_max >= 0, h > 0, t >= 0");
  f.require_member(p.zeta);
  f.require_member(q.zeta);
  const Algebra& alg = f.algebra();

  auto ends = [&](double s) { return SuperOperator::sandwich(p.beta.exp(s).adjoint(), q.beta.exp(s)).matrix(); };
  QuadratureResult out;
  out.value = AlgebraElement::from_coords(alg, ends(t) * b.coords());

  const double zz = p.zeta.norm() * q.zeta.norm();
  const double growth = std::exp(t * (p.beta.norm() + q.beta.norm()));
  double term = 1.0;
  double tail = 0.0;
  for (int n = 1; n <= n_max + 40; ++n) {
    term *= t * zz / n;
    if (n > n_max) tail += term;
  }
  out.truncation_bound = tail * growth * b.norm();

  if (t == 0.0 || n_max == 0) return out;
  const int grid = std::max(1, static_cast<int>(std::ceil(t / h - 1e-9)));
  const double step = t / grid;
  out.grid = grid;
  out.step = step;

  kernels::ChainTables tables;
  tables.grid = grid;
  for (int j = 0; j <= grid; ++j) tables.gap.push_back(ends(j * step));
  for (int j = 0; j < grid; ++j) tables.half.push_back(ends((j + 0.5) * step));
  tables.insert =
      SuperOperator::from_map(alg, [&](const AlgebraElement& c) { return inner(p.zeta, f.act(c, q.zeta)); }).matrix();

  CVector acc = out.value.coords();
  const CVector bc = b.coords();
  double weight = 1.0;
  for (int n = 1; n <= std::min(n_max, grid); ++n) {
    weight *= step;
    const CVector s = exec == Exec::serial ? kernels::chain_sum_serial(tables, n, bc)
                                           : kernels::chain_sum_parallel(tables, n, bc);
    acc += weight * s;
  }
  out.value = AlgebraElement::from_coords(alg, acc);
  return out;
}

MorphismMatrix MorphismMatrix::identity(const Bimodule& f) {
  return {AlgebraElement::zero(f.algebra()), ModuleVector::zero(f.algebra(), f.rank()),
          ModuleVector::zero(f.algebra(), f.rank()), f.projection()};
}

MorphismMatrix MorphismMatrix::adjoint() const { return {gamma.adjoint(), eta_prime, eta, a.adjoint()}; }

UnitParams apply_morphism(const MorphismMatrix& g, const UnitParams& p) {
  if (p.zeta.rank() != g.a.cols() || g.eta.rank() != g.a.cols() || g.eta_prime.rank() != g.a.rows())
    throw DimensionError("apply_morphism: unit does not belong to the source system");
  return {g.gamma + p.beta + inner(g.eta, p.zeta), g.eta_prime + g.a * p.zeta};
}

bool is_bilinear(const Bimodule& source, const Bimodule& target, const BMatrix& a, double tol) {
  if (a.rows() != target.rank() || a.cols() != source.rank()) return false;
  const double scale = std::max(1.0, a.norm());
  if (distance(target.projection() * a * source.projection(), a) > tol * scale) return false;
  for (int p = 0; p < source.algebra().dim(); ++p) {
    if (distance(a * source.action(p), target.action(p) * a) > tol * scale) return false;
  }
  return true;
}

bool is_isomorphism(const Bimodule& source, const Bimodule& target, const MorphismMatrix& g, double tol) {
  if (!is_bilinear(source, target, g.a, tol)) return false;
  return distance(g.a.adjoint() * g.a, source.projection()) <= tol &&
         distance(g.a * g.a.adjoint(), target.projection()) <= tol;
}

bool satisfies_automorphism_constraints(const Bimodule& f, const MorphismMatrix& g, double tol) {
  const double scale = std::max({1.0, g.gamma.norm(), g.eta_prime.norm() * g.eta_prime.norm()});
  if (!is_central(g.gamma, tol) || !is_central_vector(f, g.eta_prime, tol)) return false;
  if (distance(g.eta, -(g.a.adjoint() * g.eta_prime)) > tol * scale) return false;
  return distance(g.gamma + g.gamma.adjoint(), -inner(g.eta_prime, g.eta_prime)) <= tol * scale;
}

bool is_spatial(const MorphismMatrix& g, double tol) {
  const auto forward = apply_morphism(g, {AlgebraElement::zero(g.gamma.algebra()),
                                          ModuleVector::zero(g.gamma.algebra(), g.a.cols())});
  const auto adj = g.adjoint();
  const auto backward = apply_morphism(adj, {AlgebraElement::zero(g.gamma.algebra()),
                                             ModuleVector::zero(g.gamma.algebra(), g.a.rows())});
  return forward.beta.norm() <= tol && forward.zeta.column().norm() <= tol && backward.beta.norm() <= tol &&
         backward.zeta.column().norm() <= tol;
}

CentralUnital is_central_unital(const Bimodule& f, const UnitParams& p, double tol) {
  CentralUnital r;
  r.central = is_central(p.beta, tol) && is_central_vector(f, p.zeta, tol);
  const auto defect = inner(p.zeta, p.zeta) + p.beta.adjoint() + p.beta;
  r.unital = defect.norm() <= tol * std::max(1.0, p.beta.norm());
  return r;
}

MorphismMatrix automorphism_to(const Bimodule& f, const UnitParams& p, double tol) {
  const auto cu = is_central_unital(f, p, tol);
  if (!cu.central || !cu.unital) throw PreconditionError("automorphism_to: unit must be central and unital");
  return {p.beta, -p.zeta, p.zeta, f.projection()};
}

}  // namespace prodsys
