#pragma once

// JSON descriptors for algebras, elements, bimodules, kernels, units and free
// units. Complex numbers are [re, im] pairs; an element is one flat row-major
// list of pairs per block.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "prodsys/free_flow.hpp"
#include "prodsys/trotter.hpp"

namespace prodsys::io {

using nlohmann::json;

/// Malformed input. `line` is 1-based for syntax errors and 0 when only the
/// field (a JSON pointer) is known.
class ParseError : public Error {
 public:
  ParseError(std::string file, int line, std::string field, std::string message);

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }
  /// The same error attributed to `file`.
  ParseError in_file(const std::string& file) const;

 private:
  std::string file_;
  int line_;
  std::string field_;
  std::string message_;
};

/// Reads and parses a JSON file; syntax errors carry the line number.
json load_json(const std::string& path);

Algebra parse_algebra(const json& j, const std::string& where = "");
AlgebraElement parse_element(const Algebra& alg, const json& j, const std::string& where = "");
BMatrix parse_bmatrix(const Algebra& alg, const json& j, const std::string& where = "");

/// {"algebra": [..], "rank": k, "free": true} or {"algebra": [..], "rank": k, "action": [BMatrix per matrix unit]}.
Bimodule parse_bimodule(const json& j, const std::string& where = "");
/// Array of `rank` elements.
ModuleVector parse_vector(const Bimodule& f, const json& j, const std::string& where = "");
/// {"beta": element, "zeta": vector}.
UnitParams parse_unit(const Bimodule& f, const json& j, const std::string& where = "");

/// One of
///   {"algebra", "labels", "entries": [[images of the matrix units] per (i, j), row-major]}
///   {"bimodule", "labels", "vectors": [...]}   kernel <x_s, b x_s'>
///   {"bimodule", "labels", "units": [...]}     generator kernel of the units
CPDKernel parse_kernel(const json& j, const std::string& where = "");

/// {"truncation": N, "terms": [{"n": n, "box": [[lo, hi], ...], "coeff": vector of F^(.)n}]}.
FreeUnitParam parse_free_unit(TensorPowers& powers, const json& j, const std::string& where = "");

json to_json(const AlgebraElement& a);
json to_json(const ModuleVector& x);
json to_json(const BMatrix& m);
json to_json(const Bimodule& f);

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 42;
  std::string out = "-";
  std::map<std::string, std::string> inputs;  // resolved against the config directory
  std::map<std::string, double> tolerances;
  json params = json::object();

  double tolerance(const std::string& name, double fallback) const;
};

/// {"experiment", "seed", "out", "inputs": {name: path}, "tolerances": {name: x > 0}, "params": {...}}.
ExperimentConfig parse_config(const json& j, const std::string& base_dir, const std::string& file = "");
ExperimentConfig load_config(const std::string& path);

}  // namespace prodsys::io
