#include "scatent/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scatent/errors.hpp"

namespace scatent {

DensityMatrix::DensityMatrix(ComplexMatrix mat, double tol) : mat_(std::move(mat)) {
  if (mat_.empty()) throw Error(ErrorCode::InvalidDensity, "empty density matrix");
  if (!mat_.is_hermitian(tol)) throw Error(ErrorCode::InvalidDensity, "density matrix is not Hermitian");
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorCode::InvalidDensity, "trace " + std::to_string(tr) + " differs from 1");
  }
  const Spectrum spec = eig_hermitian(mat_);
  if (spec.eigenvalues.front() < -tol) {
    throw Error(ErrorCode::InvalidDensity,
                "negative eigenvalue " + std::to_string(spec.eigenvalues.front()));
  }
}

BipartiteState::BipartiteState(DensityMatrix rho, std::size_t dim_a, std::size_t dim_b)
    : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a == 0 || dim_b == 0 || rho_.dim() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "state of dimension " + std::to_string(rho_.dim()) +
                                                  " is not " + std::to_string(dim_a) + "x" +
                                                  std::to_string(dim_b));
  }
}

bool ASpectralData::has_near_kernel(double limit) const noexcept {
  return std::any_of(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                     [&](double p) { return p > kernel_tol && p < limit; });
}

double entropy_of_spectrum(std::span<const double> eigenvalues, double zero_tol) {
  double s = 0.0;
  for (double p : eigenvalues) {
    p = std::clamp(p, 0.0, 1.0);
    if (p <= zero_tol || p == 0.0) continue;
    s -= p * std::log(p);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho, double zero_tol) {
  const Spectrum spec = eig_hermitian(rho.matrix());
  return entropy_of_spectrum(spec.eigenvalues, zero_tol);
}

DensityMatrix reduced_a(const BipartiteState& state) {
  return DensityMatrix(partial_trace_b(state.matrix(), state.dim_a(), state.dim_b()));
}

DensityMatrix reduced_b(const BipartiteState& state) {
  return DensityMatrix(partial_trace_a(state.matrix(), state.dim_a(), state.dim_b()));
}

ASpectralData spectral_data_from(Spectrum spectrum, double kernel_tol, double degen_tol) {
  ASpectralData data;
  data.spectrum = std::move(spectrum);
  data.kernel_tol = kernel_tol;
  data.degen_tol = degen_tol;
  const auto& ev = data.spectrum.eigenvalues;
  const std::size_t n = ev.size();
  data.class_of.assign(n, 0);
  for (std::size_t m = 0; m < n; ++m) {
    const bool kern = ev[m] <= kernel_tol;
    if (kern) data.kernel.push_back(m);
    const bool starts_new =
        m == 0 || (ev[m] - ev[m - 1] > degen_tol) || (kern != (ev[m - 1] <= kernel_tol));
    if (starts_new) data.degeneracy_classes.emplace_back();
    data.degeneracy_classes.back().push_back(m);
    data.class_of[m] = data.degeneracy_classes.size() - 1;
  }
  return data;
}

ASpectralData a_spectral_data(const BipartiteState& state, double kernel_tol, double degen_tol) {
  return spectral_data_from(eig_hermitian(reduced_a(state).matrix()), kernel_tol, degen_tol);
}

ASpectralData a_spectral_data(const BipartiteState& state, const QStateConfig& cfg) {
  return a_spectral_data(state, cfg.kernel_tol, cfg.degen_tol);
}

BipartiteState product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  return BipartiteState(DensityMatrix(kron(rho_a, rho_b)), rho_a.dim(), rho_b.dim());
}

BipartiteState pure_state(std::span<const cplx> amplitudes, std::size_t dim_a, std::size_t dim_b) {
  if (amplitudes.size() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude vector length does not match dA*dB");
  }
  double norm = 0.0;
  for (const auto& z : amplitudes) norm += std::norm(z);
  if (norm == 0.0) throw Error(ErrorCode::InvalidDensity, "zero amplitude vector");
  const std::size_t n = amplitudes.size();
  ComplexMatrix rho(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm;
  return BipartiteState(DensityMatrix(std::move(rho)), dim_a, dim_b);
}

BipartiteState diagonal_state(std::span<const double> weights, std::size_t dim_a, std::size_t dim_b) {
  if (weights.size() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "weight table size does not match dA*dB");
  }
  return BipartiteState(DensityMatrix(ComplexMatrix::diagonal(weights)), dim_a, dim_b);
}

}  // namespace scatent
