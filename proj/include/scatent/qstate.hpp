#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scatent/linalg.hpp"

namespace scatent {

struct QStateConfig {
  double kernel_tol = 1e-12;
  double degen_tol = 1e-9;
  double density_tol = 1e-10;
  /// Nonzero eigenvalues below this are too close to the kernel for the
  /// first-order log expansion to be trusted.
  double near_kernel_limit = 1e-6;
};

/// Hermitian, positive semidefinite, unit-trace matrix (checked on construction).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix mat, double tol = 1e-10);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }

 private:
  ComplexMatrix mat_;
};

/// Density matrix on A (x) B with A as the major index.
class BipartiteState {
 public:
  BipartiteState(DensityMatrix rho, std::size_t dim_a, std::size_t dim_b);

  const DensityMatrix& rho() const noexcept { return rho_; }
  const ComplexMatrix& matrix() const noexcept { return rho_.matrix(); }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }

 private:
  DensityMatrix rho_;
  std::size_t dim_a_;
  std::size_t dim_b_;
};

/// Eigen-data of the reduced state on A: eigenpairs, kernel, degeneracy classes.
struct ASpectralData {
  Spectrum spectrum;
  std::vector<std::size_t> kernel;
  std::vector<std::vector<std::size_t>> degeneracy_classes;
  std::vector<std::size_t> class_of;  // eigen-index -> class index
  double kernel_tol = 1e-12;
  double degen_tol = 1e-9;

  std::size_t dim() const noexcept { return spectrum.eigenvalues.size(); }
  bool in_kernel(std::size_t m) const noexcept { return spectrum.eigenvalues[m] <= kernel_tol; }
  double eigenvalue(std::size_t m) const noexcept { return spectrum.eigenvalues[m]; }
  /// True when some eigenvalue lies strictly between kernel_tol and `limit`.
  bool has_near_kernel(double limit) const noexcept;
};

/// -sum p ln p over eigenvalues clamped to [0,1]; eigenvalues <= zero_tol count as 0.
double entropy_of_spectrum(std::span<const double> eigenvalues, double zero_tol = 1e-12);

double von_neumann_entropy(const DensityMatrix& rho, double zero_tol = 1e-12);

DensityMatrix reduced_a(const BipartiteState& state);
DensityMatrix reduced_b(const BipartiteState& state);

ASpectralData a_spectral_data(const BipartiteState& state, double kernel_tol = 1e-12,
                              double degen_tol = 1e-9);
ASpectralData a_spectral_data(const BipartiteState& state, const QStateConfig& cfg);

/// Groups ascending eigenvalues into classes; the kernel always forms its own class.
ASpectralData spectral_data_from(Spectrum spectrum, double kernel_tol, double degen_tol);

/// Convenience constructors.
BipartiteState product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b);
BipartiteState pure_state(std::span<const cplx> amplitudes, std::size_t dim_a, std::size_t dim_b);
/// Diagonal state with weights p[m*dB + mt] in the computational product basis.
BipartiteState diagonal_state(std::span<const double> weights, std::size_t dim_a, std::size_t dim_b);

}  // namespace scatent
