#pragma once

#include <iosfwd>
#include <string>

#include "scatent/harness.hpp"

namespace scatent {

/// Full report as JSON text (stable key order, fixed precision).
std::string report_json(const Report& r);
std::string suite_json(const std::vector<SuiteEntry>& entries);

/// lambda,delta_s_exact,model_value,residual
std::string sweep_csv(const SweepFit& fit);

void print_report(std::ostream& os, const Report& r);
void print_suite(std::ostream& os, const std::vector<SuiteEntry>& entries);

}  // namespace scatent
