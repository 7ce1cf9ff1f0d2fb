#include "scatent/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "scatent/errors.hpp"
#include "scatent/parallel.hpp"
#include "scatent/smatrix.hpp"

namespace scatent {

namespace {

void require_lambda(double lambda, const OracleConfig& cfg) {
  if (!(lambda > 0.0 && lambda <= cfg.lambda_max)) {
    throw Error(ErrorCode::ConfigError, "lambda " + std::to_string(lambda) + " outside (0, " +
                                            std::to_string(cfg.lambda_max) + "]");
  }
}

double trace_real(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

BipartiteState evolve_exact(const BipartiteState& state, const ComplexMatrix& s, double tol) {
  if (s.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "S does not match the state");
  if (!s.is_unitary(tol)) throw Error(ErrorCode::NonUnitary, "S is not unitary within tolerance");
  ComplexMatrix out = s * state.matrix() * s.adjoint();
  // Symmetrize away rounding so the Hermiticity check sees an exact adjoint.
  out = 0.5 * (out + out.adjoint());
  return BipartiteState(DensityMatrix(std::move(out), std::max(tol, 1e-10)), state.dim_a(), state.dim_b());
}

EvolutionRecord evolve_record(const BipartiteState& state, const ComplexMatrix& t1, double lambda,
                              const OracleConfig& cfg) {
  require_lambda(lambda, cfg);
  if (t1.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "t1 does not match the state");
  const BipartiteState out = evolve_exact(state, exact_s(t1, lambda), cfg.unitarity_tol);

  EvolutionRecord rec;
  rec.lambda = lambda;
  const Spectrum in_a = eig_hermitian(reduced_a(state).matrix());
  const Spectrum out_a = eig_hermitian(reduced_a(out).matrix());
  rec.delta_s_a = entropy_of_spectrum(out_a.eigenvalues, cfg.entropy_zero_tol) -
                  entropy_of_spectrum(in_a.eigenvalues, cfg.entropy_zero_tol);

  const Spectrum in_full = eig_hermitian(state.matrix());
  const Spectrum out_full = eig_hermitian(out.matrix());
  rec.full_entropy_change = std::abs(entropy_of_spectrum(out_full.eigenvalues, cfg.entropy_zero_tol) -
                                     entropy_of_spectrum(in_full.eigenvalues, cfg.entropy_zero_tol));
  for (std::size_t k = 0; k < in_full.eigenvalues.size(); ++k)
    rec.spectrum_defect = std::max(rec.spectrum_defect, std::abs(in_full.eigenvalues[k] - out_full.eigenvalues[k]));
  rec.trace_defect = std::abs(trace_real(out.matrix()) - 1.0);
  return rec;
}

double exact_delta_entropy(const BipartiteState& state, const ComplexMatrix& t1, double lambda,
                           const OracleConfig& cfg) {
  require_lambda(lambda, cfg);
  if (t1.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "t1 does not match the state");
  const BipartiteState out = evolve_exact(state, exact_s(t1, lambda), cfg.unitarity_tol);
  const Spectrum in_a = eig_hermitian(reduced_a(state).matrix());
  const Spectrum out_a = eig_hermitian(reduced_a(out).matrix());
  return entropy_of_spectrum(out_a.eigenvalues, cfg.entropy_zero_tol) -
         entropy_of_spectrum(in_a.eigenvalues, cfg.entropy_zero_tol);
}

std::vector<double> default_lambda_grid() { return {1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5}; }

void validate_grid(std::span<const double> grid) {
  if (grid.size() < 6) {
    throw Error(ErrorCode::ConfigError, "lambda grid needs at least 6 points, got " + std::to_string(grid.size()));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] <= 0.1)) {
      throw Error(ErrorCode::ConfigError, "lambda grid entry " + std::to_string(i) + " outside (0, 0.1]");
    }
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw Error(ErrorCode::ConfigError, "lambda grid must be strictly decreasing at entry " + std::to_string(i));
    }
  }
  if (std::log10(grid.front() / grid.back()) < 3.0 - 1e-12) {
    throw Error(ErrorCode::ConfigError, "lambda grid must span at least 3 decades");
  }
}

SweepFit fit_coefficients(std::span<const double> grid, std::span<const double> delta_s, double max_condition) {
  validate_grid(grid);
  if (delta_s.size() != grid.size()) throw Error(ErrorCode::DimensionMismatch, "samples do not match the grid");
  const auto n = static_cast<Eigen::Index>(grid.size());

  // Each row divided by lambda^2, so every decade carries the same relative weight:
  //   dS / l^2 = a / l + b ln(1/l^2) + c.
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = grid[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0 / l;
    x(i, 1) = std::log(1.0 / (l * l));
    x(i, 2) = 1.0;
    y(i) = delta_s[static_cast<std::size_t>(i)] / (l * l);
  }
  // Column equilibration; the condition estimate refers to the scaled basis.
  Eigen::Vector3d scale;
  for (int j = 0; j < 3; ++j) scale(j) = x.col(j).norm();
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;

  SweepFit fit;
  fit.lambda_grid.assign(grid.begin(), grid.end());
  fit.condition_estimate = cond;
  if (!(cond <= max_condition)) {
    throw Error(ErrorCode::IllConditionedFit, "fit basis condition estimate " + std::to_string(cond) +
                                                  " exceeds " + std::to_string(max_condition));
  }
  const Eigen::Vector3d coef = svd.solve(y).cwiseQuotient(scale);
  fit.a = coef(0);
  fit.b = coef(1);
  fit.c = coef(2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = grid[i];
    FitPoint p;
    p.lambda = l;
    p.delta_s = delta_s[i];
    p.model = fit.a * l + fit.b * l * l * std::log(1.0 / (l * l)) + fit.c * l * l;
    p.residual = p.delta_s - p.model;
    fit.residual_max = std::max(fit.residual_max, std::abs(p.residual));
    fit.points.push_back(p);
  }
  return fit;
}

SweepFit sweep_and_fit(const BipartiteState& state, const ComplexMatrix& t1, std::span<const double> grid,
                       const OracleConfig& cfg) {
  validate_grid(grid);
  std::vector<double> ds(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { ds[i] = exact_delta_entropy(state, t1, grid[i], cfg); });
  return fit_coefficients(grid, ds, cfg.max_condition);
}

SweepFit sweep_and_fit(const BipartiteState& state, const ComplexMatrix& t1, const OracleConfig& cfg) {
  const auto grid = default_lambda_grid();
  return sweep_and_fit(state, t1, grid, cfg);
}

std::vector<EvolutionRecord> sweep_records(const BipartiteState& state, const ComplexMatrix& t1,
                                           std::span<const double> grid, const OracleConfig& cfg) {
  std::vector<EvolutionRecord> recs(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { recs[i] = evolve_record(state, t1, grid[i], cfg); });
  return recs;
}

}  // namespace scatent
