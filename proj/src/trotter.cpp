#include "prodsys/trotter.hpp"

#include <cmath>

namespace prodsys {

void WeightedUnits::validate(double tol) const {
  if (terms.empty()) throw PreconditionError("weighted units: empty list");
  Complex total = 0.0;
  for (const auto& [k, p] : terms) total += k;
  if (std::abs(total - Complex(1.0)) > tol) throw PreconditionError("weighted units: weights must sum to 1");
}

UnitParams boxplus(const WeightedUnits& w) {
  w.validate();
  UnitParams out{w.terms.front().second.beta * Complex(0.0), w.terms.front().second.zeta * Complex(0.0)};
  for (const auto& [k, p] : w.terms) {
    out.beta += p.beta * k;
    out.zeta += p.zeta * k;
  }
  return out;
}

UnitParams trotter_product(const UnitParams& p1, const UnitParams& p2) {
  return {p1.beta + p2.beta, p1.zeta + p2.zeta};
}

Exponentialized exponentialize(const UnitParams& p) {
  return {{p.beta * Complex(0.0), p.zeta}, p.beta};
}

namespace {

SuperOperator mean_step(const Bimodule& f, const WeightedUnits& w, double s) {
  SuperOperator y = SuperOperator::zero(f.algebra());
  for (const auto& [ki, pi] : w.terms)
    for (const auto& [kj, pj] : w.terms) y += superop_exp(generator(f, pi, pj), s) * (std::conj(ki) * kj);
  return y;
}

SuperOperator cross_step(const Bimodule& f, const UnitParams& reference, const WeightedUnits& w, double s) {
  SuperOperator z = SuperOperator::zero(f.algebra());
  for (const auto& [k, p] : w.terms) z += superop_exp(generator(f, reference, p), s) * k;
  return z;
}

SuperOperator power(const SuperOperator& step, int n) {
  SuperOperator out = SuperOperator::identity(step.algebra());
  for (int i = 0; i < n; ++i) out = step * out;
  return out;
}

void check_steps(double t, int n) {
  if (n < 1 || !(t >= 0.0)) throw PreconditionError("approximant: need n >= 1 and t >= 0");
}

}  // namespace

SuperOperator approximant_map(const Bimodule& f, const WeightedUnits& w, double t, int n) {
  w.validate();
  check_steps(t, n);
  return power(mean_step(f, w, t / n), n);
}

AlgebraElement approximant_semigroup(const Bimodule& f, const WeightedUnits& w, double t, int n,
                                     const AlgebraElement& b) {
  return approximant_map(f, w, t, n)(b);
}

SuperOperator cross_approximant_map(const Bimodule& f, const UnitParams& reference, const WeightedUnits& w,
                                    double t, int n) {
  w.validate();
  check_steps(t, n);
  return power(cross_step(f, reference, w, t / n), n);
}

AlgebraElement cross_approximant(const Bimodule& f, const UnitParams& reference, const WeightedUnits& w, double t,
                                 int n, const AlgebraElement& b) {
  return cross_approximant_map(f, reference, w, t, n)(b);
}

SuperOperator approximant_map(const Bimodule& f, const WeightedUnits& w, const std::vector<double>& steps) {
  w.validate();
  SuperOperator out = SuperOperator::identity(f.algebra());
  for (double s : steps) {
    if (!(s > 0.0)) throw PreconditionError("approximant: partition steps must be positive");
    out = mean_step(f, w, s) * out;
  }
  return out;
}

}  // namespace prodsys
