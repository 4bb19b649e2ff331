#include <doctest.h>

#include <functional>

#include <omp.h>

#include "prodsys/free_flow.hpp"
#include "prodsys/kernels/simplex.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::testing;

namespace {

kernels::ChainTables random_tables(Rng& rng, int grid, int dim) {
  kernels::ChainTables t;
  t.grid = grid;
  for (int j = 0; j <= grid; ++j) t.gap.push_back(random_matrix(rng, dim, dim) * 0.3);
  for (int j = 0; j < grid; ++j) t.half.push_back(random_matrix(rng, dim, dim) * 0.3);
  t.insert = random_matrix(rng, dim, dim) * 0.3;
  return t;
}

// Direct enumeration of every chain M > j_n > ... > j_1 >= 0.
CVector chains_by_enumeration(const kernels::ChainTables& t, int n, const CVector& b) {
  CVector acc = CVector::Zero(b.size());
  std::vector<int> js;
  std::function<void(int)> rec = [&](int upper) {
    if (static_cast<int>(js.size()) == n) {
      // js holds j_n, ..., j_1.
      CVector v = t.insert * (t.half[static_cast<std::size_t>(t.grid - 1 - js[0])] * b);
      for (std::size_t k = 1; k < js.size(); ++k) v = t.insert * (t.gap[static_cast<std::size_t>(js[k - 1] - js[k])] * v);
      acc += t.half[static_cast<std::size_t>(js.back())] * v;
      return;
    }
    for (int j = upper - 1; j >= 0; --j) {
      js.push_back(j);
      rec(j);
      js.pop_back();
    }
  };
  rec(t.grid);
  return acc;
}

}  // namespace

TEST_CASE("chain sum against enumeration") {
  Rng rng(91);
  const auto t = random_tables(rng, 7, 4);
  const CVector b = random_matrix(rng, 4, 1);
  for (int n = 1; n <= 4; ++n) {
    const CVector expected = chains_by_enumeration(t, n, b);
    CHECK((kernels::chain_sum_serial(t, n, b) - expected).norm() <= 1e-13 * std::max(1.0, expected.norm()));
  }
  CHECK(kernels::chain_sum_serial(t, 8, b).norm() == 0.0);
  CHECK_THROWS_AS(kernels::chain_sum_serial(t, 0, b), std::invalid_argument);
}

TEST_CASE("parallel chain sum is bit-identical") {
  Rng rng(92);
  const auto t = random_tables(rng, 40, 5);
  const CVector b = random_matrix(rng, 5, 1);
  const int saved = omp_get_max_threads();
  for (int n : {1, 3, 6}) {
    const CVector serial = kernels::chain_sum_serial(t, n, b);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      CHECK(kernels::chain_sum_parallel(t, n, b) == serial);
    }
  }
  omp_set_num_threads(saved);
}

TEST_CASE("ordered sum does not depend on the thread count") {
  Rng rng(93);
  std::vector<CMatrix> parts;
  for (int i = 0; i < 50; ++i) parts.push_back(random_matrix(rng, 3, 3) * std::pow(10.0, i % 7 - 3));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const CMatrix ref = kernels::ordered_sum(50, 3, 3, [&](int i) { return parts[static_cast<std::size_t>(i)]; });
  CMatrix direct = CMatrix::Zero(3, 3);
  for (const auto& p : parts) direct += p;
  CHECK(ref == direct);
  for (int threads : {2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(kernels::ordered_sum(50, 3, 3, [&](int i) { return parts[static_cast<std::size_t>(i)]; }) == ref);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("grid operator is bit-identical across thread counts") {
  Rng rng(94);
  TensorPowers pw(random_bimodule(kM2, 1, rng));
  FreeUnitParam z(3);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 2; ++k) {
      IndicatorTerm term;
      for (int d = 0; d < n - 1; ++d) term.box.push_back({0.1 * (k + d), 0.5 + 0.2 * k});
      term.coeff = random_vector(pw.power(n), rng);
      z.add_term(n, std::move(term));
    }
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto ref = inner_grid_operator(pw, z, z, 3, 1.0 / 20, Exec::parallel);
  for (int threads : {2, 4}) {
    omp_set_num_threads(threads);
    CHECK(inner_grid_operator(pw, z, z, 3, 1.0 / 20, Exec::parallel).matrix() == ref.matrix());
  }
  omp_set_num_threads(saved);
}
