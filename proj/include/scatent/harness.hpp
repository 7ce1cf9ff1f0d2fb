#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scatent/criteria.hpp"
#include "scatent/errors.hpp"
#include "scatent/oracle.hpp"
#include "scatent/perturb.hpp"
#include "scatent/scenario.hpp"

namespace scatent {

/// |pred - fit| / max(|fit|, 1e-12)
double relative_error(double predicted, double fitted);

struct Agreement {
  std::string coefficient;  // "a", "b", "c"
  std::string source;       // which closed form supplied the prediction
  double predicted = 0.0;
  double fitted = 0.0;
  double rel_error = 0.0;
  bool ok = false;
};

struct DemonStep {
  std::size_t evaluation = 0;
  std::string move;  // "sample", "flip", "coordinate"
  double delta_s = 0.0;
  double best = 0.0;
  double step = 0.0;
};

struct DemonResult {
  ComplexMatrix t1_best;
  double delta_s_best = 0.0;
  std::string description;  // how the best candidate was produced
  std::vector<DemonStep> trace;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
};

struct ProbeResult {
  double min_delta_s = 0.0;
  std::size_t argmin_sample = 0;
  std::uint64_t argmin_seed = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  Guarantee verdict = Guarantee::NoGuarantee;
  bool violation = false;  // StrictIncrease verdict but min < -tolerance
};

struct SanitySummary {
  std::size_t evolutions = 0;
  double full_entropy_change = 0.0;
  double spectrum_defect = 0.0;
  double trace_defect = 0.0;
};

struct Report {
  ScenarioConfig config;  // echoes tolerances and seeds
  GuaranteeVerdict verdict;
  bool special_form = false;
  double special_form_defect = 0.0;
  UnitarityReport unitarity;
  PerturbativePrediction prediction;
  std::optional<double> thermal_coeff;
  std::optional<SweepFit> fit;
  std::vector<Agreement> agreements;
  std::optional<DemonResult> demon;
  std::optional<ProbeResult> probe;
  std::optional<SanitySummary> sanity;
  bool agreements_ok() const;
};

/// classify -> predict -> (sweep_and_fit -> compare) -> demon/probe, by mode.
Report run_scenario(const ScenarioConfig& cfg);

DemonResult demon_search(const ScenarioConfig& cfg, std::size_t budget, std::uint64_t seed);
ProbeResult guarantee_probe(const ScenarioConfig& cfg, std::size_t samples, std::uint64_t seed);

/// The built-in library reproducing the worked examples.
std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> builtin_scenario(const std::string& name);

struct SuiteEntry {
  std::string name;
  std::optional<Report> report;
  std::string error;  // set when the scenario threw
  std::optional<ErrorCode> error_code;
};

/// Runs the scenarios concurrently; results keep input order.
std::vector<SuiteEntry> run_suite(const std::vector<ScenarioConfig>& scenarios);

}  // namespace scatent
