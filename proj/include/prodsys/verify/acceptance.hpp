#pragma once

// The acceptance criteria as seeded report generators. Each criterion draws
// its random instances from Rng(mix(seed, id)), so a criterion replays the
// same instances whether it runs alone or inside the full suite.

#include <cstdint>
#include <string>
#include <vector>

#include "prodsys/free_flow.hpp"
#include "prodsys/verify/report.hpp"

namespace prodsys::verify {

struct Criterion {
  int id;
  std::string tag;
  std::string title;
  Report (*run)(std::uint64_t seed);
};

const std::vector<Criterion>& acceptance_criteria();

/// All criteria in order.
Report run_acceptance(std::uint64_t seed);

/// Seed for criterion `id` derived from the suite seed.
std::uint64_t criterion_seed(std::uint64_t seed, int id);

/// Every way of cutting `tuple` into consecutive pieces such that each piece's
/// entries are ≥ its first entry and first entries decrease strictly.
/// Exhaustive over the 2^(n-1) cut sets; independent of decompose().
std::vector<std::vector<TimeTuple>> admissible_segmentations(const TimeTuple& tuple);

}  // namespace prodsys::verify
