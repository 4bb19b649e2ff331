#pragma once

// Named experiments driven by an ExperimentConfig. Malformed inputs throw
// io::ParseError; numerical violations become failing report rows.

#include <ostream>
#include <string>
#include <vector>

#include "prodsys/io.hpp"
#include "prodsys/verify/report.hpp"

namespace prodsys::verify {

const std::vector<std::string>& experiment_names();

/// Runs `config.experiment`. Human-readable output (e.g. the decomposition
/// printed by decompose-tuple) goes to `console`.
Report run_experiment(const io::ExperimentConfig& config, std::ostream& console);

}  // namespace prodsys::verify
