#include "prodsys/kernels/simplex.hpp"

#include <stdexcept>

namespace prodsys::kernels {

namespace {

void check(const ChainTables& t, int n) {
  if (n < 1) throw std::invalid_argument("chain_sum: n must be at least 1");
  if (t.grid < 1 || static_cast<int>(t.gap.size()) != t.grid + 1 || static_cast<int>(t.half.size()) != t.grid)
    throw std::invalid_argument("chain_sum: inconsistent tables");
}

// w[j] holds the sum over all partial chains whose lowest fixed index is j.
// One level step lowers the chain by one insertion:
//   next[i] = Σ_{j > i} Z·gap[j - i] · w[j], summed in increasing j.
CVector chain_sum(const ChainTables& t, int n, const CVector& b, bool parallel) {
  check(t, n);
  const int m = t.grid;
  std::vector<CMatrix> zgap;
  zgap.reserve(t.gap.size());
  for (const auto& g : t.gap) zgap.push_back(t.insert * g);

  std::vector<CVector> w(static_cast<std::size_t>(m));
#pragma omp parallel for if (parallel) schedule(static)
  for (int j = 0; j < m; ++j) w[static_cast<std::size_t>(j)] = t.insert * (t.half[static_cast<std::size_t>(m - 1 - j)] * b);

  for (int level = 1; level < n; ++level) {
    std::vector<CVector> next(static_cast<std::size_t>(m));
#pragma omp parallel for if (parallel) schedule(dynamic)
    for (int i = 0; i < m; ++i) {
      CVector acc = CVector::Zero(b.size());
      for (int j = i + 1; j < m; ++j) acc.noalias() += zgap[static_cast<std::size_t>(j - i)] * w[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] = std::move(acc);
    }
    w = std::move(next);
  }

  std::vector<CVector> closing(static_cast<std::size_t>(m));
#pragma omp parallel for if (parallel) schedule(static)
  for (int j = 0; j < m; ++j) closing[static_cast<std::size_t>(j)] = t.half[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
  CVector total = CVector::Zero(b.size());
  for (const auto& c : closing) total += c;
  return total;
}

}  // namespace

CVector chain_sum_serial(const ChainTables& tables, int n, const CVector& b) { return chain_sum(tables, n, b, false); }

CVector chain_sum_parallel(const ChainTables& tables, int n, const CVector& b) { return chain_sum(tables, n, b, true); }

}  // namespace prodsys::kernels
