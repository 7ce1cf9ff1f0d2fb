#include "scatent/report.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace scatent {

namespace {

using json = nlohmann::ordered_json;

json matrix_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (m(i, j) != cplx{}) entries.push_back({i, j, m(i, j).real(), m(i, j).imag()});
  return {{"dim", m.dim()}, {"entries", entries}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["dims"] = {c.dim_a, c.dim_b};
  j["mode"] = to_string(c.mode);
  j["lambda_grid"] = c.lambda_grid;
  j["tolerances"] = {{"kernel_tol", c.tol.kernel_tol},   {"degen_tol", c.tol.degen_tol},
                     {"commutator_tol", c.tol.commutator_tol}, {"t_tol", c.tol.t_tol},
                     {"agreement", c.tol.agreement},     {"probe", c.tol.probe}};
  json seeds;
  if (const auto* r = std::get_if<RandomT>(&c.t)) seeds["t"] = r->seed;
  if (const auto* p = std::get_if<ProtectedT>(&c.t)) seeds["t"] = p->seed;
  if (c.h2_seed) seeds["h2"] = *c.h2_seed;
  seeds["demon"] = c.demon.seed;
  seeds["probe"] = c.probe.seed;
  j["seeds"] = seeds;
  j["demon"] = {{"budget", c.demon.budget}, {"lambda", c.demon.lambda}};
  j["probe"] = {{"samples", c.probe.samples}, {"lambda", c.probe.lambda}};
  return j;
}

json verdict_json(const GuaranteeVerdict& v) {
  json w = json::array();
  for (const auto& x : v.witnesses) w.push_back({{"kind", x.kind}, {"indices", x.indices}, {"defect", x.defect}});
  return {{"overall", to_string(v.overall)},
          {"kernel_nonempty", v.kernel_nonempty},
          {"commutation_ok", v.commutation_ok},
          {"commutation_defect", v.commutation_defect},
          {"t_mixes_kernel", v.t_mixes_kernel},
          {"t_nontrivial_on_b", v.t_nontrivial_on_b},
          {"witnesses", w}};
}

json prediction_json(const PerturbativePrediction& p) {
  json shifts = json::array();
  for (const auto& s : p.shifts) {
    shifts.push_back({{"class", s.class_index},
                      {"eigenvalue", s.eigenvalue},
                      {"kernel", s.kernel},
                      {"first_order", s.first_order},
                      {"second_order", s.second_order}});
  }
  return {{"branch", to_string(p.branch)},
          {"commutation_ok", p.commutation_ok},
          {"near_kernel", p.near_kernel},
          {"order1_coeff", opt(p.order1_coeff)},
          {"log_coeff", p.log_coeff},
          {"log_coeff_expanded", opt(p.log_coeff_expanded)},
          {"order2_coeff", opt(p.order2_coeff)},
          {"order2_general", opt(p.order2_general)},
          {"nonkernel_pair_coeff", opt(p.nonkernel_pair_coeff)},
          {"near_kernel_log_coeff", opt(p.near_kernel_log_coeff)},
          {"excluded_pairs", p.excluded_pairs},
          {"shifts", shifts},
          {"notes", p.notes}};
}

json fit_json(const SweepFit& f) {
  json pts = json::array();
  for (const auto& p : f.points)
    pts.push_back({{"lambda", p.lambda}, {"delta_s", p.delta_s}, {"model", p.model}, {"residual", p.residual}});
  return {{"a", f.a},
          {"b", f.b},
          {"c", f.c},
          {"lambda_grid", f.lambda_grid},
          {"residual_max", f.residual_max},
          {"condition_estimate", f.condition_estimate},
          {"points", pts}};
}

json report_object(const Report& r) {
  json j;
  j["scenario"] = config_json(r.config);
  j["verdict"] = verdict_json(r.verdict);
  j["special_form"] = {{"ok", r.special_form}, {"defect", r.special_form_defect}};
  j["unitarity"] = {{"t1_hermiticity_defect", r.unitarity.t1_hermiticity_defect},
                    {"t2_constraint_defect", r.unitarity.t2_constraint_defect},
                    {"optical_defect", r.unitarity.optical_defect},
                    {"consistent", r.unitarity.consistent}};
  if (r.config.mode != Mode::Check) j["prediction"] = prediction_json(r.prediction);
  if (r.thermal_coeff) j["thermal_coeff"] = *r.thermal_coeff;
  if (r.fit) j["fit"] = fit_json(*r.fit);
  json ag = json::array();
  for (const auto& a : r.agreements) {
    ag.push_back({{"coefficient", a.coefficient},
                  {"source", a.source},
                  {"predicted", a.predicted},
                  {"fitted", a.fitted},
                  {"rel_error", a.rel_error},
                  {"ok", a.ok}});
  }
  j["agreements"] = ag;
  if (r.sanity) {
    j["sanity"] = {{"evolutions", r.sanity->evolutions},
                   {"full_entropy_change", r.sanity->full_entropy_change},
                   {"spectrum_defect", r.sanity->spectrum_defect},
                   {"trace_defect", r.sanity->trace_defect}};
  }
  if (r.demon) {
    const auto& d = *r.demon;
    json trace = json::array();
    for (const auto& s : d.trace)
      trace.push_back({{"evaluation", s.evaluation}, {"move", s.move}, {"delta_s", s.delta_s}, {"best", s.best},
                       {"step", s.step}});
    j["demon"] = {{"delta_s_best", d.delta_s_best}, {"description", d.description}, {"budget", d.budget},
                  {"seed", d.seed}, {"lambda", d.lambda}, {"t1_best", matrix_json(d.t1_best)},
                  {"trace", trace}};
  }
  if (r.probe) {
    const auto& p = *r.probe;
    j["probe"] = {{"min_delta_s", p.min_delta_s}, {"argmin_sample", p.argmin_sample},
                  {"argmin_seed", p.argmin_seed}, {"samples", p.samples}, {"seed", p.seed},
                  {"lambda", p.lambda}, {"verdict", to_string(p.verdict)}, {"violation", p.violation}};
  }
  return j;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string report_json(const Report& r) { return report_object(r).dump(2) + "\n"; }

std::string suite_json(const std::vector<SuiteEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    if (e.report) {
      arr.push_back(report_object(*e.report));
    } else {
      arr.push_back({{"scenario", {{"name", e.name}}}, {"error", e.error}});
    }
  }
  return arr.dump(2) + "\n";
}

std::string sweep_csv(const SweepFit& fit) {
  std::ostringstream os;
  os << "lambda,delta_s_exact,model_value,residual\n";
  os << std::setprecision(17);
  for (const auto& p : fit.points) os << p.lambda << ',' << p.delta_s << ',' << p.model << ',' << p.residual << '\n';
  return os.str();
}

void print_report(std::ostream& os, const Report& r) {
  const auto& v = r.verdict;
  os << "scenario " << r.config.name << " (" << r.config.dim_a << "x" << r.config.dim_b << ", "
     << to_string(r.config.mode) << ")\n";
  os << "  verdict      " << to_string(v.overall) << "  kernel=" << (v.kernel_nonempty ? "yes" : "no")
     << " commutation=" << (v.commutation_ok ? "ok" : "fails") << " (defect " << fmt(v.commutation_defect) << ")"
     << " mixes=" << (v.t_mixes_kernel ? "yes" : "no") << " b-nontrivial=" << (v.t_nontrivial_on_b ? "yes" : "no")
     << "\n";
  os << "  special form " << (r.special_form ? "yes" : "no") << " (defect " << fmt(r.special_form_defect) << ")\n";
  if (r.config.mode != Mode::Check) {
    const auto& p = r.prediction;
    os << "  branch       " << to_string(p.branch) << "\n";
    os << "  predicted    a=" << (p.order1_coeff ? fmt(*p.order1_coeff) : "n/a") << " b=" << fmt(p.log_coeff)
       << " c=" << (p.order2_coeff ? fmt(*p.order2_coeff) : "n/a") << "\n";
    if (p.nonkernel_pair_coeff) os << "  pair sum     " << fmt(*p.nonkernel_pair_coeff) << "\n";
    if (r.thermal_coeff) os << "  thermal c    " << fmt(*r.thermal_coeff) << "\n";
    for (const auto& n : p.notes) os << "  note         " << n << "\n";
  }
  if (r.fit) {
    os << "  fitted       a=" << fmt(r.fit->a) << " b=" << fmt(r.fit->b) << " c=" << fmt(r.fit->c)
       << "  (residual " << fmt(r.fit->residual_max) << ", cond " << fmt(r.fit->condition_estimate) << ")\n";
  }
  for (const auto& a : r.agreements) {
    os << "  agreement    " << a.coefficient << " vs " << a.source << ": rel " << fmt(a.rel_error)
       << (a.ok ? "  ok" : "  MISMATCH") << "\n";
  }
  if (r.sanity) {
    os << "  sanity       full dS " << fmt(r.sanity->full_entropy_change) << ", spectrum "
       << fmt(r.sanity->spectrum_defect) << ", trace " << fmt(r.sanity->trace_defect) << "\n";
  }
  if (r.demon) {
    os << "  demon        best dS " << fmt(r.demon->delta_s_best) << " after " << r.demon->trace.size()
       << " evaluations (" << r.demon->description << ")\n";
  }
  if (r.probe) {
    os << "  probe        min dS " << fmt(r.probe->min_delta_s) << " over " << r.probe->samples
       << " samples (arg-min seed " << r.probe->argmin_seed << ")" << (r.probe->violation ? "  VIOLATION" : "")
       << "\n";
  }
}

void print_suite(std::ostream& os, const std::vector<SuiteEntry>& entries) {
  for (const auto& e : entries) {
    if (!e.report) {
      os << e.name << ": error: " << e.error << "\n";
      continue;
    }
    print_report(os, *e.report);
  }
}

}  // namespace scatent
