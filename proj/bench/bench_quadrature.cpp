// Serial reference vs OpenMP kernels for the simplex quadrature.
//   OMP_NUM_THREADS=4 ./bench_quadrature

#include <benchmark/benchmark.h>

#include "prodsys/free_flow.hpp"
#include "prodsys/kernels/simplex.hpp"
#include "prodsys/random.hpp"

using namespace prodsys;

namespace {

kernels::ChainTables tables(int grid, int dim) {
  Rng rng(7);
  kernels::ChainTables t;
  t.grid = grid;
  for (int j = 0; j <= grid; ++j) t.gap.push_back(random_matrix(rng, dim, dim) * 0.1);
  for (int j = 0; j < grid; ++j) t.half.push_back(random_matrix(rng, dim, dim) * 0.1);
  t.insert = random_matrix(rng, dim, dim) * 0.1;
  return t;
}

void chain_sum(benchmark::State& state, bool parallel) {
  const int grid = static_cast<int>(state.range(0));
  const auto t = tables(grid, 4);
  Rng rng(8);
  const kernels::CVector b = random_matrix(rng, 4, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel ? kernels::chain_sum_parallel(t, 6, b) : kernels::chain_sum_serial(t, 6, b));
  state.SetComplexityN(grid);
}

void BM_ChainSumSerial(benchmark::State& s) { chain_sum(s, false); }
void BM_ChainSumParallel(benchmark::State& s) { chain_sum(s, true); }

void grid_operator(benchmark::State& state, Exec exec) {
  Rng rng(9);
  TensorPowers pw(random_bimodule(Algebra::matrix(2), 1, rng));
  FreeUnitParam z(3);
  for (int n = 1; n <= 3; ++n) {
    IndicatorTerm term;
    for (int d = 0; d < n - 1; ++d) term.box.push_back({0.0, 0.75});
    term.coeff = random_vector(pw.power(n), rng);
    z.add_term(n, std::move(term));
  }
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(inner_grid_operator(pw, z, z, 3, h, exec));
}

void BM_GridOperatorSerial(benchmark::State& s) { grid_operator(s, Exec::serial); }
void BM_GridOperatorParallel(benchmark::State& s) { grid_operator(s, Exec::parallel); }

}  // namespace

BENCHMARK(BM_ChainSumSerial)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_ChainSumParallel)->RangeMultiplier(2)->Range(32, 256)->Complexity(benchmark::oNSquared);
BENCHMARK(BM_GridOperatorSerial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(BM_GridOperatorParallel)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
