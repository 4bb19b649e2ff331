#include <doctest.h>

#include <string>

#include "prodsys/cpd_kernel.hpp"
#include "prodsys/tof_units.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::testing;

namespace {

const std::vector<std::string> kLabels3{"a", "b", "c"};

CPDKernel random_cpd(const Bimodule& f, Rng& rng, const std::vector<std::string>& labels) {
  std::vector<ModuleVector> vs;
  for (std::size_t i = 0; i < labels.size(); ++i) vs.push_back(random_vector(f, rng));
  return CPDKernel::from_vectors(f, labels, vs);
}

double roundtrip_residual(const CPDKernel& k, const Kolmogorov& kd) {
  const Algebra& alg = k.algebra();
  double worst = 0.0;
  for (int i = 0; i < k.size(); ++i)
    for (int j = 0; j < k.size(); ++j)
      for (int p = 0; p < alg.dim(); ++p) {
        const auto u = AlgebraElement::unit(alg, p);
        const auto got = inner(kd.zeta[i], kd.module.act(u, kd.zeta[j]));
        worst = std::max(worst, distance(got, k.at(i, j)(u)));
      }
  return worst;
}

// Rank of the flattened Gram [K^{σσ'}(u_p* u_q)], assembled by hand.
int flattened_gram_rank(const CPDKernel& k) {
  const Algebra& alg = k.algebra();
  int rank = 0;
  for (int l = 0; l < alg.num_blocks(); ++l) {
    const int d = alg.block_size(l);
    const int n = k.size() * alg.dim();
    CMatrix g = CMatrix::Zero(n * d, n * d);
    for (int i = 0; i < k.size(); ++i)
      for (int j = 0; j < k.size(); ++j)
        for (int p = 0; p < alg.dim(); ++p)
          for (int q = 0; q < alg.dim(); ++q) {
            const auto arg = AlgebraElement::unit(alg, p).adjoint() * AlgebraElement::unit(alg, q);
            g.block((i * alg.dim() + p) * d, (j * alg.dim() + q) * d, d, d) = k.at(i, j)(arg).block(l);
          }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e)
      if (es.eigenvalues()(e) > 1e-8 * top) rank += 1;
  }
  return rank;
}

}  // namespace

TEST_CASE("is_cpd examples") {
  Rng rng(31);
  const auto f = Bimodule::free(kM2, 1);
  CHECK(is_cpd(random_cpd(f, rng, kLabels3)));
  const CPDKernel neg({"s"}, {SuperOperator::identity(kM2) * Complex(-1.0)});
  CHECK_FALSE(is_cpd(neg));
  const CPDKernel asym({"s", "t"}, {SuperOperator::zero(kM2), SuperOperator::identity(kM2),
                                    SuperOperator::zero(kM2), SuperOperator::zero(kM2)});
  CHECK(asym.symmetry_residual() > 0.5);
  CHECK_THROWS_AS(is_cpd(asym), SymmetryError);
  CHECK_THROWS_AS(CPDKernel({"s", "s"}, std::vector<SuperOperator>(4, SuperOperator::zero(kM2))),
                  DimensionError);
}

TEST_CASE("Kolmogorov of the zero kernel") {
  const CPDKernel zero({"a", "b"}, std::vector<SuperOperator>(4, SuperOperator::zero(kCplusM2)));
  const auto kd = kolmogorov(zero);
  CHECK(kd.module.flat_rank() == 0);
  for (const auto& z : kd.zeta) CHECK(z.norm() == 0.0);
}

TEST_CASE("Kolmogorov round trip and minimality") {
  Rng rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const Algebra& alg = trial % 2 ? kM2 : kCplusM2;
    const auto f = random_bimodule(alg, 1 + trial % 3, rng, trial % 2);
    const auto k = random_cpd(f, rng, kLabels3);
    const auto kd = kolmogorov(k);
    CHECK(kd.module.invariant_residual() <= 1e-10);
    CHECK(roundtrip_residual(k, kd) < 1e-9);
    CHECK(kd.module.flat_rank() == flattened_gram_rank(k));
  }
  // Kernel from elements of B itself.
  std::vector<ModuleVector> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(ModuleVector::basis(kM2, 1, 0, random_element(kM2, rng)));
  const auto k = CPDKernel::from_vectors(Bimodule::free(kM2, 1), kLabels3, xs);
  const auto kd = kolmogorov(k);
  CHECK(roundtrip_residual(k, kd) < 1e-9);
  CHECK(kd.module.flat_rank() <= 2);
}

TEST_CASE("Kolmogorov rejects non-CPD input") {
  const CPDKernel neg({"s"}, {SuperOperator::identity(kM2) * Complex(-1.0)});
  CHECK_THROWS_AS(kolmogorov(neg), PreconditionError);
}

TEST_CASE("semigroup_at") {
  Rng rng(33);
  const auto f = random_bimodule(kCplusM2, 2, rng);
  const auto l = unit_kernel(f, kLabels3, {UnitParams::vacuum(f),
                                        UnitParams{random_element(kCplusM2, rng, 1.0), random_vector(f, rng)},
                                        UnitParams{random_element(kCplusM2, rng, 1.0), random_vector(f, rng)}});
  const auto k0 = semigroup_at(l, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(distance(k0.at(i, j), SuperOperator::identity(kCplusM2)) == 0.0);

  const double s = 0.4, t = 0.7;
  const auto lhs = semigroup_at(l, s + t);
  const auto rhs = compose(semigroup_at(l, t), semigroup_at(l, s));
  CHECK(distance(lhs, rhs) < 1e-10);

  const CPDKernel scalar({"x", "y"}, {SuperOperator(kScalars, CMatrix::Constant(1, 1, Complex(0.3, 0))),
                                      SuperOperator(kScalars, CMatrix::Constant(1, 1, Complex(-0.2, 0.5))),
                                      SuperOperator(kScalars, CMatrix::Constant(1, 1, Complex(-0.2, -0.5))),
                                      SuperOperator(kScalars, CMatrix::Constant(1, 1, Complex(1.0, 0)))});
  const auto e = semigroup_at(scalar, 1.5);
  CHECK(std::abs(e.at(0, 1).matrix()(0, 0) - std::exp(1.5 * Complex(-0.2, 0.5))) < 1e-14);
  CHECK(std::abs(e.at(1, 1).matrix()(0, 0) - std::exp(1.5)) < 1e-13);
}

TEST_CASE("reference unit is unital along the semigroup") {
  Rng rng(34);
  const auto f = random_bimodule(kM2, 2, rng);
  const auto l = unit_kernel(f, {"w", "x"}, {UnitParams::vacuum(f),
                                          UnitParams{random_element(kM2, rng, 1.0), random_vector(f, rng)}});
  const auto one = AlgebraElement::identity(kM2);
  for (double t : {0.1, 1.0, 3.0}) CHECK(distance(semigroup_at(l, t).at(0, 0)(one), one) < 1e-12);
}

TEST_CASE("ce_split of a unit generator") {
  Rng rng(35);
  const auto f = random_bimodule(kCplusM2, 2, rng, 1);
  const std::vector<UnitParams> units{UnitParams::vacuum(f),
                                      UnitParams{random_element(kCplusM2, rng, 1.0), random_vector(f, rng)},
                                      UnitParams{random_element(kCplusM2, rng, 1.0), random_vector(f, rng)}};
  const auto l = unit_kernel(f, kLabels3, units);
  const auto split = ce_split(l, "a");
  CHECK(split.beta[0].norm() == 0.0);
  for (int j = 0; j < 3; ++j) {
    CHECK(split.l0.at(0, j).norm() < 1e-14);
    CHECK(split.l0.at(j, 0).norm() < 1e-14);
  }
  for (int i = 1; i < 3; ++i) CHECK(distance(split.beta[i], units[i].beta) < 1e-13);
  // L0 is the ζ-part of the generator.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto expected = SuperOperator::from_map(kCplusM2, [&](const AlgebraElement& b) {
        return inner(units[i].zeta, f.act(b, units[j].zeta));
      });
      CHECK(distance(split.l0.at(i, j), expected) < 1e-13);
    }
  CHECK(is_cpd(split.l0));
  CHECK(distance(ce_recombine(split), l) < 1e-14);
}

TEST_CASE("ce_split preconditions") {
  Rng rng(36);
  // A generator row that is not a right multiplication.
  const auto x = random_element(kM2, rng);
  std::vector<ModuleVector> xs{ModuleVector::basis(kM2, 1, 0, x), ModuleVector::basis(kM2, 1, 0, x.adjoint())};
  const auto k = CPDKernel::from_vectors(Bimodule::free(kM2, 1), {"w", "v"}, xs);
  CHECK_THROWS_AS(ce_split(k, "w"), PreconditionError);
  CHECK_THROWS_AS(ce_split(k, "missing"), PreconditionError);

  // L = −id on the diagonal: CE form exists only if L0 is CPD, and here it is not.
  const auto one = AlgebraElement::identity(kM2);
  const auto bad_entry = SuperOperator::sandwich(one, one) * Complex(-1.0);
  const CPDKernel bad({"w", "v"}, {SuperOperator::zero(kM2), SuperOperator::zero(kM2), SuperOperator::zero(kM2),
                                   bad_entry});
  CHECK_THROWS_AS(ce_split(bad, "w"), PreconditionError);
}

TEST_CASE("kernel from vectors round trips for arbitrary families") {
  Rng rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = random_bimodule(kScalars, 3, rng, 1);
    const auto k = random_cpd(f, rng, {"p", "q"});
    CHECK(roundtrip_residual(k, kolmogorov(k)) < 1e-9);
  }
}
