#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <string>

#include "scatent/criteria.hpp"
#include "scatent/errors.hpp"
#include "scatent/harness.hpp"
#include "scatent/oracle.hpp"
#include "scatent/perturb.hpp"
#include "scatent/report.hpp"
#include "scatent/scenario.hpp"

namespace py = pybind11;
using namespace scatent;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw Error(ErrorCode::DimensionMismatch, "expected a square matrix");
  const std::size_t n = static_cast<std::size_t>(a.shape(0));
  return ComplexMatrix(n, std::vector<cplx>(a.data(), a.data() + n * n));
}

CArray to_array(const ComplexMatrix& m) {
  CArray out({m.dim(), m.dim()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

BipartiteState to_state(const CArray& rho, std::size_t da, std::size_t db) {
  return BipartiteState(DensityMatrix(to_matrix(rho)), da, db);
}

ScenarioConfig resolve(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) {
    auto cfg = builtin_scenario(source.substr(8));
    if (!cfg) throw Error(ErrorCode::ConfigError, "unknown builtin scenario '" + source.substr(8) + "'");
    return *cfg;
  }
  return parse_scenario(source, "<python>");
}

}  // namespace

PYBIND11_MODULE(_scatent, m) {
  m.doc() = "Perturbative subsystem entropy change in bipartite scattering";

  static py::exception<Error> exc(m, "ScatentError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      PyErr_SetObject(err.ptr(), py::make_tuple(e.what(), to_string(e.code())).ptr());
    }
  });

  m.def("builtin_names", [] {
    std::vector<std::string> names;
    for (const auto& c : builtin_scenarios()) names.push_back(c.name);
    return names;
  });
  m.def("scenario_yaml", [](const std::string& source) { return dump_scenario(resolve(source)); },
        py::arg("source"));
  m.def(
      "run_json",
      [](const std::string& source, const std::string& mode) {
        ScenarioConfig cfg = resolve(source);
        if (!mode.empty()) cfg.mode = mode_from_string(mode);
        py::gil_scoped_release nogil;
        return report_json(run_scenario(cfg));
      },
      py::arg("source"), py::arg("mode") = "");
  m.def("suite_json", [] {
    py::gil_scoped_release nogil;
    return suite_json(run_suite(builtin_scenarios()));
  });

  m.def(
      "exact_delta_entropy",
      [](const CArray& rho, const CArray& t1, std::size_t da, std::size_t db, double lam) {
        return exact_delta_entropy(to_state(rho, da, db), to_matrix(t1), lam);
      },
      py::arg("rho"), py::arg("t1"), py::arg("dim_a"), py::arg("dim_b"), py::arg("lam"));
  m.def(
      "sweep_fit",
      [](const CArray& rho, const CArray& t1, std::size_t da, std::size_t db) {
        const SweepFit f = sweep_and_fit(to_state(rho, da, db), to_matrix(t1));
        return py::dict(py::arg("a") = f.a, py::arg("b") = f.b, py::arg("c") = f.c,
                        py::arg("residual_max") = f.residual_max, py::arg("condition") = f.condition_estimate);
      },
      py::arg("rho"), py::arg("t1"), py::arg("dim_a"), py::arg("dim_b"));
  m.def(
      "predict",
      [](const CArray& rho, const CArray& t1, std::size_t da, std::size_t db) {
        const PerturbativePrediction p = predict(to_state(rho, da, db), to_matrix(t1));
        py::dict d;
        d["branch"] = to_string(p.branch);
        d["commutation_ok"] = p.commutation_ok;
        d["order1"] = p.order1_coeff;
        d["log"] = p.log_coeff;
        d["order2"] = p.order2_coeff;
        d["order2_general"] = p.order2_general;
        d["nonkernel_pair"] = p.nonkernel_pair_coeff;
        d["notes"] = p.notes;
        return d;
      },
      py::arg("rho"), py::arg("t1"), py::arg("dim_a"), py::arg("dim_b"));
  m.def(
      "classify",
      [](const CArray& rho, const CArray& t1, std::size_t da, std::size_t db) {
        return to_string(classify(to_state(rho, da, db), to_matrix(t1)).overall);
      },
      py::arg("rho"), py::arg("t1"), py::arg("dim_a"), py::arg("dim_b"));
  m.def(
      "random_hermitian", [](std::size_t n, std::uint64_t seed) { return to_array(random_hermitian(n, seed)); },
      py::arg("dim"), py::arg("seed"));
}
