// verify: run the seeded property suites and write a report.
//
//   verify --suite all --dim 4,8,16 --trials 100 --seed 42 --format text
//   verify --config run.ini --tol roundtrip_eps=1e-12
//
// Exit status is 0 iff every check passes, 1 if some check fails, 2 on a
// configuration error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grassmann/error.hpp"
#include "grassmann/restricted.hpp"
#include "grassmann/verifier.hpp"

namespace {

using namespace grassmann;

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::config_error, "--tol expects name=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty())
      throw Error(ErrorKind::config_error, "bad tolerance value in '" + item + "'");
    out[key] = v;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded numerical checks for Grassmannian charts and bundle transitions"};
  app.set_config("--config", "", "key = value config file; command-line flags win");

  std::string suite = "all";
  std::vector<Index> dims{4, 8, 16};
  int trials = 100;
  std::uint64_t seed = 42;
  std::vector<std::string> tols;
  std::vector<Index> ladder{16, 32, 64, 128};
  std::string format = "text";
  std::string out_path;
  std::string experiment_out;
  bool serial = false;

  app.add_option("--suite", suite, "atlas | bundles | restricted | all")
      ->check(CLI::IsMember({"atlas", "bundles", "restricted", "all"}));
  app.add_option("--dim", dims, "ambient dimension(s), comma separated")->delimiter(',');
  app.add_option("--trials", trials, "trials per dimension");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--tol", tols, "tolerance override name=value (repeatable)");
  app.add_option("--ladder", ladder, "truncation ladder, comma separated")->delimiter(',');
  app.add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--experiment-out", experiment_out,
                 "write the trace-class preservation experiment as JSON");
  app.add_flag("--serial", serial, "run trials on one thread (reference path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    SuiteConfig cfg;
    cfg.suite = suite_from_string(suite);
    cfg.dims = dims;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.tolerances = parse_tolerances(tols);
    cfg.ladder = ladder;
    cfg.exec = serial ? ExecPolicy::serial : ExecPolicy::openmp;
    cfg.validate();

    const auto results = run_suite(cfg);
    const std::string report = emit_report(
        results, format == "json" ? ReportFormat::json : ReportFormat::text, &cfg);
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw Error(ErrorKind::config_error, "cannot open " + out_path);
      f << report;
    }

    if (!experiment_out.empty()) {
      const auto rep = preservation_experiment(
          cfg.ladder, 1.0, seeded_family(DecayProfile::geometric(0.5), cfg.seed), cfg.exec);
      std::ofstream f(experiment_out);
      if (!f) throw Error(ErrorKind::config_error, "cannot open " + experiment_out);
      f << to_json(rep).dump(2) << "\n";
    }

    for (const auto& r : results)
      if (!r.pass) return 1;
    return 0;
  } catch (const Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
}
