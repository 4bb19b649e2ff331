#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "prodsys/io.hpp"
#include "prodsys/verify/acceptance.hpp"
#include "prodsys/verify/experiments.hpp"
#include "support.hpp"

using namespace prodsys;
using namespace prodsys::testing;
using io::json;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("prodsys_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

const std::string kFixtures = PRODSYS_FIXTURES;

}  // namespace

TEST_CASE("element serialization round trip") {
  Rng rng(201);
  for (const auto& alg : {kScalars, kM2, kCplusM2}) {
    const auto a = random_element(alg, rng);
    CHECK(distance(io::parse_element(alg, io::to_json(a)), a) == 0.0);
  }
  const auto e = io::parse_element(kM2, json::parse("[[[1,0],[0,2],[3,0],[0,0]]]"));
  CHECK(e.block(0)(0, 1) == Complex(0, 2));
  CHECK(e.block(0)(1, 0) == Complex(3, 0));
}

TEST_CASE("bimodule and vector round trip") {
  Rng rng(202);
  const auto f = random_bimodule(kCplusM2, 2, rng, 1);
  const auto g = io::parse_bimodule(io::to_json(f));
  REQUIRE(g.rank() == f.rank());
  for (int p = 0; p < kCplusM2.dim(); ++p) CHECK(distance(g.action(p), f.action(p)) == 0.0);
  const auto x = random_vector(f, rng);
  CHECK(distance(io::parse_vector(f, io::to_json(x)), x) == 0.0);
}

TEST_CASE("kernel formats agree") {
  Rng rng(203);
  const auto f = random_bimodule(kM2, 2, rng);
  const std::vector<std::string> labels{"a", "b"};
  std::vector<ModuleVector> vs{random_vector(f, rng), random_vector(f, rng)};
  const auto k = CPDKernel::from_vectors(f, labels, vs);

  json by_vectors{{"bimodule", io::to_json(f)}, {"labels", labels}, {"vectors", {io::to_json(vs[0]), io::to_json(vs[1])}}};
  CHECK(distance(io::parse_kernel(by_vectors), k) <= 1e-15);

  json entries = json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      json images = json::array();
      for (int p = 0; p < kM2.dim(); ++p) images.push_back(io::to_json(k.at(i, j)(AlgebraElement::unit(kM2, p))));
      entries.push_back(images);
    }
  json by_entries{{"algebra", {2}}, {"labels", labels}, {"entries", entries}};
  CHECK(distance(io::parse_kernel(by_entries), k) <= 1e-15);
}

TEST_CASE("parse errors carry line or field") {
  const auto path = write_temp("syntax.json", "{\n  \"a\": 1,\n  \"b\": [1, 2,\n}\n");
  try {
    io::load_json(path);
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.file() == path);
  }

  try {
    io::parse_bimodule(json::parse(R"({"algebra": [2], "rank": 1, "action": [1, 2]})"));
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.field() == "/action");
  }
  try {
    io::parse_element(kM2, json::parse("[[[1,0],[0,0],[0,0],[0,\"x\"]]]"));
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.field() == "/0/3/1");
  }
  CHECK_THROWS_AS(io::parse_config(json::parse(R"({"tolerances": {"semigroup": 0}})"), ""), io::ParseError);
  CHECK_THROWS_AS(io::parse_config(json::parse(R"({"seed": -3})"), ""), io::ParseError);
  CHECK_THROWS_AS(io::load_json("/nonexistent/prodsys.json"), io::ParseError);
}

TEST_CASE("config resolves inputs relative to its directory") {
  const auto c = io::parse_config(json::parse(R"({"experiment": "semigroup", "inputs": {"kernel": "k.json"},
                                                   "tolerances": {"semigroup": 1e-9}, "seed": 7})"),
                                  "/data/run");
  CHECK(c.inputs.at("kernel") == "/data/run/k.json");
  CHECK(c.seed == 7);
  CHECK(c.tolerance("semigroup", 1.0) == 1e-9);
  CHECK(c.tolerance("other", 0.5) == 0.5);
}

TEST_CASE("decompose-tuple experiment") {
  io::ExperimentConfig c;
  c.experiment = "decompose-tuple";
  c.params["tuple"] = {3, 1, 2, 2, 1};
  std::ostringstream console;
  const auto r = verify::run_experiment(c, console);
  CHECK(console.str() == "[3][1 2 2 1]\n");
  CHECK(r.all_pass());
}

TEST_CASE("trotter-converge with a single weight has zero error") {
  const auto c = io::load_config(kFixtures + "/trotter_trivial.json");
  std::ostringstream console;
  const auto r = verify::run_experiment(c, console);
  CHECK(r.all_pass());
  for (const auto& row : r.rows()) CHECK(row.residual <= 1e-12);
}

TEST_CASE("transpose fixture is not CPD") {
  const auto c = io::load_config(kFixtures + "/check_transpose.json");
  std::ostringstream console;
  CHECK(verify::run_experiment(c, console).all_pass());
}

TEST_CASE("reports are byte-identical for a fixed seed") {
  auto c = io::load_config(kFixtures + "/suite.json");
  std::ostringstream console, a, b, other;
  verify::run_experiment(c, console).write_csv(a);
  verify::run_experiment(c, console).write_csv(b);
  CHECK(a.str() == b.str());
  c.seed = 43;
  verify::run_experiment(c, console).write_csv(other);
  CHECK(other.str() != a.str());
}

TEST_CASE("criterion seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (const auto& c : verify::acceptance_criteria()) seen.insert(verify::criterion_seed(42, c.id));
  CHECK(seen.size() == verify::acceptance_criteria().size());
}
