// One line per criterion: PASS/FAIL, tag, worst row. Exit status 1 if any fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "prodsys/verify/acceptance.hpp"

using namespace prodsys::verify;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 42;
  bool ok = true;
  for (const auto& c : acceptance_criteria()) {
    const Report r = c.run(criterion_seed(seed, c.id));
    const bool pass = r.all_pass();
    ok = ok && pass;
    std::printf("%s  %2d %-20s %s\n", pass ? "PASS" : "FAIL", c.id, c.tag.c_str(), c.title.c_str());
    for (const auto& row : r.rows())
      std::printf("        %s %s: %s (tol %s)\n", row.pass ? "ok  " : "FAIL", row.assertion.c_str(),
                  format_residual(row.residual).c_str(), format_residual(row.tolerance).c_str());
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
