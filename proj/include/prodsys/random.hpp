#pragma once

// Seeded random instances. The generator is std::mt19937_64; uniforms take the
// top 53 bits, normals use Box–Muller. Both mappings are written out here so
// that a seed replays identically on every standard library.

#include <cstdint>
#include <random>

#include "prodsys/bimodule.hpp"

namespace prodsys {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n-1}.
  int index(int n) { return static_cast<int>(uniform() * n); }
  double normal();
  /// Standard complex normal: E|z|² = 1.
  Complex cnormal();

  /// Independent stream for a sub-experiment.
  Rng split() { return Rng(engine_()); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

CMatrix random_matrix(Rng& rng, int rows, int cols);
AlgebraElement random_element(const Algebra& alg, Rng& rng);
/// Random direction scaled to norm uniform in (0, max_norm].
AlgebraElement random_element(const Algebra& alg, Rng& rng, double max_norm);
AlgebraElement random_hermitian(const Algebra& alg, Rng& rng);
AlgebraElement random_unitary(const Algebra& alg, Rng& rng);
/// Unitary k×k B-matrix.
BMatrix random_unitary(const Algebra& alg, int k, Rng& rng);

/// π(a) = U diag(a, ..., a, 0, ..., 0) U* with `dropped` zero slots.
Bimodule random_bimodule(const Algebra& alg, int rank, Rng& rng, int dropped = 0);

/// Random vector of F with Gram norm uniform in (0, max_norm].
ModuleVector random_vector(const Bimodule& f, Rng& rng, double max_norm = 1.0);

}  // namespace prodsys
