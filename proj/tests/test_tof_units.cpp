#include <doctest.h>

#include <functional>

#include "prodsys/tof_units.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::testing;

namespace {

UnitParams random_unit(const Bimodule& f, Rng& rng, double scale = 1.0) {
  return {random_element(f.algebra(), rng, scale), random_vector(f, rng, scale)};
}

// Midpoint sum over the ordered grid simplex, one grid point at a time.
AlgebraElement brute_force_quadrature(const Bimodule& f, const UnitParams& p, const UnitParams& q, double t,
                                      const AlgebraElement& b, int n_max, int grid) {
  TensorPowers pw(f);
  const double step = t / grid;
  auto term = [&](const std::vector<double>& tuple) {
    const int n = static_cast<int>(tuple.size());
    const auto x = exponential_unit_component(pw, p, t, tuple);
    const auto y = exponential_unit_component(pw, q, t, tuple);
    return inner(x, pw.power(n).act(b, y));
  };
  AlgebraElement sum = term({});
  std::vector<double> tuple;
  std::function<void(int, int, double)> rec = [&](int remaining, int upper, double weight) {
    if (remaining == 0) {
      sum += term(tuple) * Complex(weight);
      return;
    }
    for (int j = upper - 1; j >= remaining - 1; --j) {
      tuple.push_back((j + 0.5) * step);
      rec(remaining - 1, j, weight * step);
      tuple.pop_back();
    }
  };
  for (int n = 1; n <= n_max; ++n) rec(n, grid, 1.0);
  return sum;
}

}  // namespace

TEST_CASE("generator examples") {
  Rng rng(41);
  const auto f = random_bimodule(kCplusM2, 2, rng);
  const auto vac = UnitParams::vacuum(f);
  CHECK(generator(f, vac, vac).norm() == 0.0);

  const auto beta = random_element(kCplusM2, rng);
  const auto beta2 = random_element(kCplusM2, rng);
  const auto b = random_element(kCplusM2, rng);
  const auto l = generator(f, {beta, vac.zeta}, {beta2, vac.zeta});
  CHECK(distance(l(b), beta.adjoint() * b + b * beta2) < 1e-13);

  const auto g = Bimodule::free(kScalars, 1);
  const Complex z1(0.3, -0.4), z2(-1.1, 0.2), b1(0.5, 0.1), b2(-0.2, 0.7);
  const UnitParams p{AlgebraElement::central(kScalars, {b1}),
                     ModuleVector::basis(kScalars, 1, 0, AlgebraElement::central(kScalars, {z1}))};
  const UnitParams q{AlgebraElement::central(kScalars, {b2}),
                     ModuleVector::basis(kScalars, 1, 0, AlgebraElement::central(kScalars, {z2}))};
  CHECK(std::abs(generator(g, p, q).matrix()(0, 0) - (std::conj(z1) * z2 + std::conj(b1) + b2)) < 1e-15);
  CHECK_THROWS_AS(generator(f, vac, UnitParams::vacuum(Bimodule::free(kCplusM2, 1))), DimensionError);
}

TEST_CASE("unit_inner examples") {
  Rng rng(42);
  const auto f = random_bimodule(kM2, 2, rng);
  const auto vac = UnitParams::vacuum(f);
  const auto b = random_element(kM2, rng);
  for (double t : {0.0, 0.5, 4.0}) CHECK(distance(unit_inner(f, vac, vac, t, b), b) < 1e-14);

  const auto g = Bimodule::free(kScalars, 1);
  const Complex z1(0.6, 0.2), z2(-0.3, 0.9);
  const UnitParams p{AlgebraElement::zero(kScalars),
                     ModuleVector::basis(kScalars, 1, 0, AlgebraElement::central(kScalars, {z1}))};
  const UnitParams q{AlgebraElement::zero(kScalars),
                     ModuleVector::basis(kScalars, 1, 0, AlgebraElement::central(kScalars, {z2}))};
  const double t = 1.7;
  // Scalar series Σ (t z̄1 z2)^n / n!.
  Complex series = 0.0, term = 1.0;
  for (int n = 0; n < 60; ++n) {
    series += term;
    term *= t * std::conj(z1) * z2 / double(n + 1);
  }
  const auto one = AlgebraElement::identity(kScalars);
  CHECK(std::abs(unit_inner(g, p, q, t, one).block(0)(0, 0) - series) < 1e-13);
  CHECK_THROWS_AS(unit_inner(g, p, q, -1.0, one), PreconditionError);
}

TEST_CASE("unit_inner semigroup law") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_bimodule(kCplusM2, 2, rng, trial % 2);
    const auto p = random_unit(f, rng);
    const auto q = random_unit(f, rng);
    const auto b = random_element(kCplusM2, rng);
    const double s = rng.uniform(0, 1.5), t = rng.uniform(0, 1.5);
    const auto lhs = unit_inner(f, p, q, s + t, b);
    const auto rhs = unit_inner(f, p, q, t, unit_inner(f, p, q, s, b));
    CHECK(rel(distance(lhs, rhs), lhs.norm()) < 1e-10);
  }
}

TEST_CASE("exponential unit components") {
  Rng rng(44);
  const auto f = random_bimodule(kM2, 2, rng);
  TensorPowers pw(f);
  const auto p = random_unit(f, rng);
  const double t = 1.3;
  const auto e0 = exponential_unit_component(pw, p, t, {});
  CHECK(distance(e0.entry(0), p.beta.exp(t)) < 1e-14);

  const UnitParams q{AlgebraElement::zero(kM2), p.zeta};
  CHECK(distance(exponential_unit_component(pw, q, t, {0.4}), p.zeta) < 1e-14);
  CHECK(distance(exponential_unit_component(pw, q, t, {0.9, 0.2}), pw.tensor(p.zeta, 1, p.zeta)) < 1e-14);

  // One insertion with the exponentials written out: e^{(t−s)β}ζ e^{sβ}.
  const double s = 0.45;
  const auto expected = f.act(p.beta.exp(t - s), p.zeta) * p.beta.exp(s);
  CHECK(distance(exponential_unit_component(pw, p, t, {s}), expected) < 1e-13);

  CHECK_THROWS_AS(exponential_unit_component(pw, p, t, {0.2, 0.9}), PreconditionError);
  CHECK_THROWS_AS(exponential_unit_component(pw, p, t, {0.5, 0.5}), PreconditionError);
  CHECK_THROWS_AS(exponential_unit_component(pw, p, t, {t}), PreconditionError);
}

TEST_CASE("quadrature matches a brute-force grid sum") {
  Rng rng(45);
  const auto f = random_bimodule(kCplusM2, 2, rng, 1);
  const auto p = random_unit(f, rng);
  const auto q = random_unit(f, rng);
  const auto b = random_element(kCplusM2, rng);
  const double t = 0.8;
  const int grid = 6;
  const auto expected = brute_force_quadrature(f, p, q, t, b, 3, grid);
  for (Exec e : {Exec::serial, Exec::parallel}) {
    const auto r = quadrature_inner(f, p, q, t, b, 3, t / grid, e);
    CHECK(r.grid == grid);
    CHECK(distance(r.value, expected) < 1e-12);
  }
}

TEST_CASE("quadrature examples") {
  Rng rng(46);
  const auto f = random_bimodule(kM2, 2, rng);
  const auto vac = UnitParams::vacuum(f);
  const auto b = random_element(kM2, rng);
  CHECK(distance(quadrature_inner(f, vac, vac, 2.0, b, 4, 0.1).value, b) == 0.0);

  // B = ℂ, ζ = 1: the integrand is 1, so the n-th grid term counts chains, C(M, n)/Mⁿ.
  const auto g = Bimodule::free(kScalars, 1);
  const UnitParams one{AlgebraElement::zero(kScalars),
                       ModuleVector::basis(kScalars, 1, 0, AlgebraElement::identity(kScalars))};
  const auto id = AlgebraElement::identity(kScalars);
  const int grid = 512;
  double prev = 1.0;
  for (int n_max : {1, 2, 4, 8}) {
    const auto r = quadrature_inner(g, one, one, 1.0, id, n_max, 1.0 / grid);
    double count = 1.0, binom = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      binom *= double(grid - n + 1) / n / grid;
      count += binom;
    }
    CHECK(std::abs(r.value.block(0)(0, 0) - count) < 1e-12);
    // Partial sums approach e up to the O(1/M) midpoint defect e/(2M).
    const double err = std::abs(r.value.block(0)(0, 0).real() - std::exp(1.0));
    CHECK(err < prev);
    CHECK(err <= r.truncation_bound + std::exp(1.0) / grid);
    prev = err;
  }
}

TEST_CASE("quadrature converges linearly to unit_inner") {
  Rng rng(47);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_bimodule(kM2, 2, rng, trial % 2);
    const auto p = random_unit(f, rng, 0.8);
    const auto q = random_unit(f, rng, 0.8);
    const auto b = random_element(kM2, rng);
    const double t = 1.0;
    const auto exact = unit_inner(f, p, q, t, b);
    std::vector<double> errs;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const auto r = quadrature_inner(f, p, q, t, b, 8, h);
      CHECK(r.truncation_bound < 1e-6);
      errs.push_back(distance(r.value, exact));
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    // First order: halving h shrinks the error by about two.
    CHECK(errs[2] / errs[1] == doctest::Approx(0.5).epsilon(0.25));
  }
}

TEST_CASE("morphism application") {
  Rng rng(48);
  const auto f = random_bimodule(kCplusM2, 2, rng);
  const auto p = random_unit(f, rng);
  CHECK(distance(apply_morphism(MorphismMatrix::identity(f), p), p) < 1e-14);

  const auto gamma = random_element(kCplusM2, rng);
  const auto u = random_unitary(kCplusM2, 2, rng);
  const MorphismMatrix g{gamma, ModuleVector::zero(kCplusM2, 2), ModuleVector::zero(kCplusM2, 2), u};
  const auto r = apply_morphism(g, p);
  CHECK(distance(r.beta, gamma + p.beta) < 1e-14);
  CHECK(distance(r.zeta, u * p.zeta) < 1e-14);
  CHECK_THROWS_AS(apply_morphism(g, UnitParams::vacuum(Bimodule::free(kCplusM2, 3))), DimensionError);
}

TEST_CASE("isomorphism checks") {
  Rng rng(49);
  const auto f = random_bimodule(kM2, 2, rng);
  CHECK(is_isomorphism(f, f, MorphismMatrix::identity(f)));
  auto zero = MorphismMatrix::identity(f);
  zero.a = BMatrix(kM2, 2, 2);
  CHECK_FALSE(is_isomorphism(f, f, zero));

  // F = B and F' = B with left action b ↦ u b u*; a(x) = u x intertwines them.
  const auto u = random_unitary(kM2, rng);
  const auto src = Bimodule::free(kM2, 1);
  std::vector<BMatrix> twisted;
  for (int p = 0; p < kM2.dim(); ++p)
    twisted.push_back(BMatrix::diagonal(u * AlgebraElement::unit(kM2, p) * u.adjoint(), 1));
  const Bimodule dst(kM2, 1, twisted);
  MorphismMatrix g{AlgebraElement::zero(kM2), ModuleVector::zero(kM2, 1), ModuleVector::zero(kM2, 1),
                   BMatrix::diagonal(u, 1)};
  CHECK(is_bilinear(src, dst, g.a));
  CHECK(is_isomorphism(src, dst, g));
  CHECK_FALSE(is_bilinear(src, src, g.a));
  // Bilinearity on a sample: a(bxc) = b·a(x)·c.
  const auto x = random_vector(src, rng);
  const auto b = random_element(kM2, rng);
  const auto c = random_element(kM2, rng);
  CHECK(distance(g.a * (src.act(b, x) * c), dst.act(b, g.a * x) * c) < 1e-12);
}

TEST_CASE("central unital units") {
  Rng rng(50);
  const auto f = Bimodule::free(kCplusM2, 2);
  const auto vac = UnitParams::vacuum(f);
  auto cu = is_central_unital(f, vac);
  CHECK(cu.central);
  CHECK(cu.unital);

  // ζ built from central entries, β = ih − ⟨ζ,ζ⟩/2.
  const auto z1 = AlgebraElement::central(kCplusM2, {0.3, Complex(0.1, -0.7)});
  const auto z2 = AlgebraElement::central(kCplusM2, {Complex(0, 0.4), 0.2});
  const auto zeta = ModuleVector::from_entries({z1, z2});
  const auto h = AlgebraElement::central(kCplusM2, {0.8, -0.25});
  const UnitParams p{h * Complex(0, 1) - inner(zeta, zeta) * Complex(0.5), zeta};
  cu = is_central_unital(f, p);
  CHECK(cu.central);
  CHECK(cu.unital);
  const auto one = AlgebraElement::identity(kCplusM2);
  CHECK(distance(unit_inner(f, p, p, 2.0, one), one) < 1e-12);

  const UnitParams grow{one, vac.zeta};
  cu = is_central_unital(f, grow);
  CHECK_FALSE(cu.unital);
  CHECK(distance(unit_inner(f, grow, grow, 1.0, one), one * Complex(std::exp(2.0))) < 1e-12);

  const UnitParams noncentral{AlgebraElement::unit(kCplusM2, 2), vac.zeta};
  CHECK_FALSE(is_central_unital(f, noncentral).central);
}

TEST_CASE("automorphism recipe") {
  const auto f = Bimodule::free(kCplusM2, 2);
  const auto vac = UnitParams::vacuum(f);
  const auto id = automorphism_to(f, vac);
  CHECK(distance(apply_morphism(id, vac), vac) == 0.0);
  CHECK(is_spatial(id));

  const auto z = ModuleVector::from_entries({AlgebraElement::central(kCplusM2, {0.5, Complex(0, 0.3)}),
                                             AlgebraElement::central(kCplusM2, {-0.2, 0.6})});
  const UnitParams p{inner(z, z) * Complex(-0.5), z};
  const auto g = automorphism_to(f, p);
  CHECK(distance(apply_morphism(g, vac), p) < 1e-14);
  CHECK(is_isomorphism(f, f, g));
  CHECK(satisfies_automorphism_constraints(f, g));
  CHECK_FALSE(is_spatial(g));

  Rng rng(51);
  std::vector<UnitParams> units{vac, p};
  for (int i = 0; i < 3; ++i) units.push_back(random_unit(f, rng));
  for (const auto& u1 : units)
    for (const auto& u2 : units) {
      const auto before = generator(f, u1, u2);
      const auto after = generator(f, apply_morphism(g, u1), apply_morphism(g, u2));
      CHECK(distance(before, after) < 1e-12);
    }
  CHECK_THROWS_AS(automorphism_to(f, UnitParams{AlgebraElement::identity(kCplusM2), vac.zeta}), PreconditionError);

  // B = ℂ, F = ℂ, ζ = 1, β = −1/2.
  const auto g1 = Bimodule::free(kScalars, 1);
  const auto one = ModuleVector::basis(kScalars, 1, 0, AlgebraElement::identity(kScalars));
  const auto s = automorphism_to(g1, {AlgebraElement::central(kScalars, {-0.5}), one});
  CHECK(s.gamma.block(0)(0, 0) == Complex(-0.5));
  CHECK(s.eta.entry(0).block(0)(0, 0) == Complex(-1.0));
  CHECK(s.eta_prime.entry(0).block(0)(0, 0) == Complex(1.0));
  CHECK(s.a.block(0)(0, 0) == Complex(1.0));
}

TEST_CASE("spatial morphisms fix the vacuum both ways") {
  Rng rng(52);
  const auto f = random_bimodule(kM2, 2, rng);
  MorphismMatrix g = MorphismMatrix::identity(f);
  CHECK(is_spatial(g));
  g.eta = random_vector(f, rng);
  // Forward image of the vacuum is unchanged, but the adjoint moves it.
  CHECK(apply_morphism(g, UnitParams::vacuum(f)).zeta.norm() == 0.0);
  CHECK_FALSE(is_spatial(g));
}
