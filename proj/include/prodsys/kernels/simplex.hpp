#pragma once

// Midpoint sums over the ordered simplex grid {M > j_n > ... > j_1 >= 0}.
// Every chain contributes
//   half[j_1] · Z·gap[j_2 - j_1] · ... · Z·gap[j_n - j_{n-1}] · Z·half[M-1-j_n] · b
// where the matrices act on matrix-unit coordinates of B.

#include <vector>

#include <Eigen/Dense>

namespace prodsys::kernels {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct ChainTables {
  int grid = 0;
  std::vector<CMatrix> gap;   // gap[j], j = 0..grid
  std::vector<CMatrix> half;  // half[j], j = 0..grid-1
  CMatrix insert;             // Z
};

/// Level-by-level recursion over the lowest index, O(n·M²) matrix-vector products.
CVector chain_sum_serial(const ChainTables& tables, int n, const CVector& b);

/// Same recursion with each level split across threads. Every partial sum keeps
/// the serial summation order, so the result is bit-identical to the serial one.
CVector chain_sum_parallel(const ChainTables& tables, int n, const CVector& b);

/// Σ over an outer index i ∈ [0, count) of f(i), with per-index results
/// combined in increasing i.
template <class F>
CMatrix ordered_sum(int count, Eigen::Index rows, Eigen::Index cols, F&& f) {
  std::vector<CMatrix> parts(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) parts[static_cast<std::size_t>(i)] = f(i);
  CMatrix total = CMatrix::Zero(rows, cols);
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace prodsys::kernels
