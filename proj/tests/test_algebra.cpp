#include <doctest.h>

#include "support.hpp"

using namespace prodsys;
using namespace prodsys::testing;

TEST_CASE("algebra layout") {
  const Algebra alg({1, 2, 3});
  CHECK(alg.dim() == 14);
  CHECK(alg.matrix_size() == 6);
  CHECK(alg.offset(2) == 5);
  const auto u = alg.unit(7);
  CHECK(u.block == 2);
  CHECK(u.row == 0);
  CHECK(u.col == 2);
  CHECK(alg.index(2, 0, 2) == 7);
  CHECK_THROWS_AS(Algebra(std::vector<int>{}), DimensionError);
  CHECK_THROWS_AS(Algebra({2, 0}), DimensionError);
}

TEST_CASE("element arithmetic") {
  Rng rng(1);
  const auto b = random_element(kCplusM2, rng);
  const auto one = AlgebraElement::identity(kCplusM2);
  CHECK(distance(one * b, b) == doctest::Approx(0.0));
  CHECK(distance(b * one, b) == doctest::Approx(0.0));
  CHECK(distance(b.adjoint().adjoint(), b) == 0.0);
  CHECK(distance(AlgebraElement::from_coords(kCplusM2, b.coords()), b) == 0.0);
  CHECK_THROWS_AS(b * random_element(kM2, rng), DimensionError);
}

TEST_CASE("positivity certificate") {
  Rng rng(2);
  const auto one = AlgebraElement::identity(kM2);
  CHECK(is_positive_element(one));
  CHECK_FALSE(is_positive_element(-one));
  for (int i = 0; i < 20; ++i) {
    const auto b = random_element(kCplusM2, rng);
    CHECK(is_positive_element(b.adjoint() * b));
  }
  const auto n = AlgebraElement::unit(kM2, 1);
  CHECK_THROWS_AS(is_positive_element(n), SymmetryError);
}

TEST_CASE("central elements") {
  CHECK(is_central(AlgebraElement::central(kCplusM2, {2.0, Complex(0, 1)}), 1e-12));
  CHECK_FALSE(is_central(AlgebraElement::unit(kCplusM2, 2), 1e-12));
}

TEST_CASE("superop_exp trivial cases") {
  Rng rng(3);
  const auto b = random_element(kM2, rng);
  const auto id = superop_exp(SuperOperator::zero(kM2), 1.7);
  CHECK(distance(id, SuperOperator::identity(kM2)) == 0.0);

  const Complex lambda(-0.3, 1.1);
  const SuperOperator l(kScalars, CMatrix::Constant(1, 1, lambda));
  const auto e = superop_exp(l, 2.0);
  CHECK(std::abs(e.matrix()(0, 0) - std::exp(2.0 * lambda)) < 1e-14);
  CHECK_THROWS_AS(superop_exp(l, std::nan("")), PreconditionError);
}

TEST_CASE("superop_exp matches direct conjugation") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Algebra& alg = trial % 2 ? kM2 : kCplusM2;
    const auto h = random_hermitian(alg, rng);
    const auto ih = h * Complex(0, 1);
    const auto l = SuperOperator::sandwich(ih.adjoint(), AlgebraElement::identity(alg)) +
                   SuperOperator::sandwich(AlgebraElement::identity(alg), ih);
    const double t = 0.9;
    const auto b = random_element(alg, rng);
    std::vector<CMatrix> forward, backward;
    for (const auto& blk : h.blocks()) {
      forward.push_back(expi_hermitian(blk, t));
      backward.push_back(expi_hermitian(blk, -t));
    }
    const auto expected = AlgebraElement(backward) * b * AlgebraElement(forward);
    const auto got = superop_exp(l, t)(b);
    CHECK(distance(got, expected) <= 1e-12 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("semigroup property of superop_exp") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const auto l = random_superop(kCplusM2, rng, 5.0 * rng.uniform());
    const double s = 2.0 * rng.uniform();
    const double t = 2.0 * rng.uniform();
    const auto lhs = superop_exp(l, s + t);
    const auto rhs = superop_exp(l, t) * superop_exp(l, s);
    CHECK(rel(distance(lhs, rhs), lhs.norm()) <= 1e-10);
  }
}

TEST_CASE("complete positivity") {
  Rng rng(6);
  CHECK(is_completely_positive(SuperOperator::identity(kM2)));
  const auto x = random_element(kM2, rng);
  CHECK(is_completely_positive(SuperOperator::conjugation(x)));

  const auto transpose = SuperOperator::from_map(kM2, [](const AlgebraElement& b) {
    return AlgebraElement(std::vector<CMatrix>{b.block(0).transpose()});
  });
  CHECK_FALSE(is_completely_positive(transpose));

  // Independent oracle: the flattened Choi matrix of the transpose is the swap, eigenvalue −1.
  CMatrix choi = CMatrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMatrix eij = CMatrix::Zero(2, 2);
      eij(i, j) = 1.0;
      choi.block(2 * i, 2 * j, 2, 2) = eij.transpose();
    }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(choi);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));

  const SuperOperator skew(kM2, random_matrix(rng, 4, 4));
  CHECK_THROWS_AS(is_completely_positive(skew), SymmetryError);
}

TEST_CASE("complete positivity is invariant under unitary conjugation") {
  Rng rng(7);
  const auto transpose = SuperOperator::from_map(kM2, [](const AlgebraElement& b) {
    return AlgebraElement(std::vector<CMatrix>{b.block(0).transpose()});
  });
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = random_unitary(kM2, rng);
    const auto cp = kraus_map({random_element(kM2, rng), random_element(kM2, rng)});
    for (const auto* t : {&cp, &transpose}) {
      const auto conj = SuperOperator::conjugation(u) * (*t) * SuperOperator::sandwich(u, u.adjoint());
      CHECK(is_completely_positive(conj) == is_completely_positive(*t));
    }
  }
}

TEST_CASE("B-matrix algebra") {
  Rng rng(8);
  const BMatrix u = random_unitary(kCplusM2, 3, rng);
  CHECK(distance(u * u.adjoint(), BMatrix::identity(kCplusM2, 3)) < 1e-12);
  const auto a = random_element(kCplusM2, rng);
  BMatrix m(kCplusM2, 2, 3);
  m.set_entry(1, 2, a);
  CHECK(distance(m.entry(1, 2), a) == 0.0);
  CHECK(distance(m.adjoint().entry(2, 1), a.adjoint()) == 0.0);
  CHECK_THROWS_AS(m * m, DimensionError);
}
