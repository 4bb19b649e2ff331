// prodsys: batch driver for the verification experiments.
//
//   prodsys --config run.json
//   prodsys --experiment suite --seed 42 --out report.csv
//   prodsys --experiment decompose-tuple 3 1 2 2 1
//
// The CSV report goes to --out ("-" for stdout). Exit status is 0 iff every
// row passes, 1 if some row fails, 2 on bad input.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "prodsys/verify/experiments.hpp"

using namespace prodsys;

int main(int argc, char** argv) {
  CLI::App app{"Verification experiments for product systems of Hilbert modules"};
  std::string config_path, experiment, out;
  std::uint64_t seed = 0;
  std::vector<double> tuple;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "experiment name (overrides the config)")
      ->check(CLI::IsMember(verify::experiment_names()));
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized instances (overrides the config)");
  app.add_option("--out", out, "report path, - for stdout (overrides the config)");
  app.add_option("tuple", tuple, "time tuple for decompose-tuple, leftmost entry first");
  CLI11_PARSE(app, argc, argv);

  try {
    io::ExperimentConfig config;
    if (!config_path.empty()) config = io::load_config(config_path);
    if (!experiment.empty()) config.experiment = experiment;
    if (*seed_opt) config.seed = seed;
    if (!out.empty()) config.out = out;
    if (!tuple.empty()) config.params["tuple"] = tuple;
    if (config.experiment.empty()) {
      std::cerr << "prodsys: no experiment given (--experiment or \"experiment\" in the config)\n";
      return 2;
    }

    const auto report = verify::run_experiment(config, std::cout);
    if (config.out == "-") {
      report.write_csv(std::cout);
    } else {
      std::ofstream os(config.out, std::ios::binary);
      if (!os) {
        std::cerr << "prodsys: cannot write " << config.out << '\n';
        return 2;
      }
      report.write_csv(os);
    }
    int failed = 0;
    for (const auto& row : report.rows())
      if (!row.pass) ++failed;
    if (failed > 0) std::cerr << "prodsys: " << failed << " of " << report.rows().size() << " assertions failed\n";
    return failed == 0 ? 0 : 1;
  } catch (const io::ParseError& e) {
    std::cerr << "prodsys: parse error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "prodsys: " << e.what() << '\n';
    return 2;
  }
}
