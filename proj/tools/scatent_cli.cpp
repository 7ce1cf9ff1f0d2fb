// Command-line front end: scenario files in, reports out.
//
// Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 guarantee violation.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scatent/errors.hpp"
#include "scatent/harness.hpp"
#include "scatent/report.hpp"

using namespace scatent;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kViolation = 3 };

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::InvalidDensity:
    case ErrorCode::ConflictingAssignment:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::EnergyViolation:
      return kConfig;
    default:
      return kNumerical;
  }
}

// "builtin:<name>" selects a library scenario, anything else is a path.
ScenarioConfig load(const std::string& what) {
  const std::string prefix = "builtin:";
  if (what.rfind(prefix, 0) == 0) {
    auto c = builtin_scenario(what.substr(prefix.size()));
    if (!c) throw Error(ErrorCode::ConfigError, "no built-in scenario '" + what.substr(prefix.size()) + "'");
    return *c;
  }
  return load_scenario(what);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  out << text;
}

int status_of(const Report& r) {
  if (r.probe && r.probe->violation) return kViolation;
  if (r.demon && r.verdict.overall == Guarantee::StrictIncrease && r.demon->delta_s_best < -r.config.tol.probe)
    return kViolation;
  if (!r.agreements_ok()) return kNumerical;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subsystem entropy change in bipartite scattering"};
  app.require_subcommand(1);

  std::string file, csv_path, json_path;
  std::size_t budget = 500, samples = 1000;
  std::uint64_t seed = 1;
  bool list = false;

  auto add_outputs = [&](CLI::App* sub) {
    sub->add_option("--csv", csv_path, "write the sweep rows as CSV");
    sub->add_option("--json", json_path, "write the full report as JSON");
  };
  auto* check = app.add_subcommand("check", "classify the scenario");
  auto* pred = app.add_subcommand("predict", "classify and evaluate the closed forms");
  auto* sweep = app.add_subcommand("sweep", "predict, then fit the exact evolution over the lambda grid");
  auto* demon = app.add_subcommand("demon", "search for an entropy-decreasing t1");
  auto* probe = app.add_subcommand("probe", "sample random t1 against the guarantee");
  auto* suite = app.add_subcommand("suite", "run the built-in scenario library");
  for (auto* sub : {check, pred, sweep, demon, probe}) {
    sub->add_option("file", file, "scenario file, or builtin:<name>")->required();
    add_outputs(sub);
  }
  demon->add_option("--budget", budget, "objective evaluations")->check(CLI::PositiveNumber);
  demon->add_option("--seed", seed, "search seed");
  probe->add_option("--samples", samples, "number of random t1")->check(CLI::PositiveNumber);
  probe->add_option("--seed", seed, "sampling seed");
  add_outputs(suite);
  suite->add_flag("--list", list, "only list the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (suite->parsed()) {
      const auto scenarios = builtin_scenarios();
      if (list) {
        for (const auto& s : scenarios) std::cout << s.name << "\n";
        return kOk;
      }
      const auto entries = run_suite(scenarios);
      print_suite(std::cout, entries);
      if (!json_path.empty()) write_file(json_path, suite_json(entries));
      int status = kOk;
      for (const auto& e : entries) {
        const int s = e.report ? status_of(*e.report) : kNumerical;
        status = std::max(status, s);
      }
      std::cout << "suite: " << entries.size() << " scenarios, status " << status << "\n";
      return status;
    }

    ScenarioConfig cfg = load(file);
    if (check->parsed()) cfg.mode = Mode::Check;
    if (pred->parsed()) cfg.mode = Mode::Predict;
    if (sweep->parsed()) cfg.mode = Mode::Sweep;
    if (demon->parsed()) {
      cfg.mode = Mode::Demon;
      cfg.demon.budget = budget;
      cfg.demon.seed = seed;
    }
    if (probe->parsed()) {
      cfg.mode = Mode::Probe;
      cfg.probe.samples = samples;
      cfg.probe.seed = seed;
    }
    const Report r = run_scenario(cfg);
    print_report(std::cout, r);
    if (!json_path.empty()) write_file(json_path, report_json(r));
    if (!csv_path.empty()) {
      if (!r.fit) throw Error(ErrorCode::ConfigError, "--csv needs a sweep (sweep, demon or probe)");
      write_file(csv_path, sweep_csv(*r.fit));
    }
    return status_of(r);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
