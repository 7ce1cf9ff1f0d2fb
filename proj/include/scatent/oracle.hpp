#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scatent/linalg.hpp"
#include "scatent/qstate.hpp"

namespace scatent {

struct OracleConfig {
  double unitarity_tol = 1e-10;
  double lambda_max = 0.5;
  double max_condition = 1e8;
  // Entropies here keep every positive eigenvalue: tiny kernel-born
  // eigenvalues carry the lambda^2 ln(1/lambda^2) term.
  double entropy_zero_tol = 0.0;
};

/// rho_out = S rho S^dagger.
BipartiteState evolve_exact(const BipartiteState& state, const ComplexMatrix& s, double tol = 1e-10);

/// Everything one exact evolution tells us, for sanity checks.
struct EvolutionRecord {
  double lambda = 0.0;
  double delta_s_a = 0.0;          // S(rho_A out) - S(rho_A in)
  double full_entropy_change = 0.0;
  double spectrum_defect = 0.0;    // max |sorted spec(rho_out) - sorted spec(rho_in)|
  double trace_defect = 0.0;       // |tr rho_out - 1|
};

EvolutionRecord evolve_record(const BipartiteState& state, const ComplexMatrix& t1, double lambda,
                              const OracleConfig& cfg = {});

/// S(reduced_a(evolve_exact(state, exp(i lambda t1)))) - S(reduced_a(state)).
double exact_delta_entropy(const BipartiteState& state, const ComplexMatrix& t1, double lambda,
                           const OracleConfig& cfg = {});

struct FitPoint {
  double lambda = 0.0;
  double delta_s = 0.0;
  double model = 0.0;
  double residual = 0.0;
};

/// delta S(lambda) = a lambda + b lambda^2 ln(1/lambda^2) + c lambda^2 + r(lambda).
struct SweepFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::vector<double> lambda_grid;
  std::vector<FitPoint> points;
  double residual_max = 0.0;
  double condition_estimate = 0.0;
};

std::vector<double> default_lambda_grid();

/// Throws ConfigError unless the grid has >= 6 strictly decreasing points in
/// (0, 0.1] spanning at least 3 decades.
void validate_grid(std::span<const double> grid);

/// Weighted least squares (weights 1/lambda^2) of given samples against the model.
SweepFit fit_coefficients(std::span<const double> grid, std::span<const double> delta_s,
                          double max_condition = 1e8);

SweepFit sweep_and_fit(const BipartiteState& state, const ComplexMatrix& t1, std::span<const double> grid,
                       const OracleConfig& cfg = {});
SweepFit sweep_and_fit(const BipartiteState& state, const ComplexMatrix& t1, const OracleConfig& cfg = {});

/// One EvolutionRecord per grid point.
std::vector<EvolutionRecord> sweep_records(const BipartiteState& state, const ComplexMatrix& t1,
                                           std::span<const double> grid, const OracleConfig& cfg = {});

}  // namespace scatent
