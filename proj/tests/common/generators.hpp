// Seeded state families shared by the unit and acceptance tests.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "scatent/linalg.hpp"
#include "scatent/qstate.hpp"

namespace gen {

using scatent::BipartiteState;
using scatent::ComplexMatrix;
using scatent::cplx;

inline ComplexMatrix haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  ComplexMatrix u(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = q(i, j);
  return u;
}

inline ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng, std::size_t rank = 0) {
  if (rank == 0) rank = n;
  std::normal_distribution<double> g;
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < rank; ++k) {
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += v[i] * std::conj(v[j]);
  }
  const double tr = r.trace().real();
  r *= 1.0 / tr;
  return 0.5 * (r + r.adjoint());
}

inline ComplexMatrix local(const ComplexMatrix& ua, const ComplexMatrix& ub) {
  const std::size_t da = ua.dim(), db = ub.dim();
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = ua(i, j) * ub(k, l);
  return out;
}

/// Diagonal in a random product basis with generic weights; `kernel_rows`
/// A-rows carry no weight.
inline BipartiteState special_form_state(std::mt19937_64& rng, std::size_t da, std::size_t db,
                                         std::size_t kernel_rows = 0) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(da * db);
  double sum = 0.0;
  for (std::size_t m = 0; m < da; ++m)
    for (std::size_t k = 0; k < db; ++k) sum += (w[m * db + k] = m < da - kernel_rows ? u(rng) : 0.0);
  for (auto& x : w) x /= sum;
  const ComplexMatrix uab = local(haar_unitary(da, rng), haar_unitary(db, rng));
  ComplexMatrix rho = uab * ComplexMatrix::diagonal(w) * uab.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteState(scatent::DensityMatrix(rho), da, db);
}

/// sum_m p_m |a_m><a_m| (x) R_m with unrelated R_m: the commutation criterion
/// holds for nondegenerate p, the product-basis form does not.
inline BipartiteState classical_quantum_state(std::mt19937_64& rng, std::size_t da, std::size_t db,
                                              std::size_t kernel_rows = 0) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(da);
  double sum = 0.0;
  for (std::size_t m = 0; m < da; ++m) sum += (p[m] = m < da - kernel_rows ? u(rng) : 0.0);
  const ComplexMatrix ua = haar_unitary(da, rng);
  ComplexMatrix rho(da * db);
  for (std::size_t m = 0; m < da; ++m) {
    if (p[m] == 0.0) continue;
    ComplexMatrix pa(da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) pa(i, j) = ua(i, m) * std::conj(ua(j, m));
    rho += (p[m] / sum) * local(pa, random_density(db, rng));
  }
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteState(scatent::DensityMatrix(rho), da, db);
}

/// Fully random density matrix (entangled with probability one).
inline BipartiteState generic_state(std::mt19937_64& rng, std::size_t da, std::size_t db) {
  return BipartiteState(scatent::DensityMatrix(random_density(da * db, rng)), da, db);
}

/// Mixture of three random product states.
inline BipartiteState separable_mixture(std::mt19937_64& rng, std::size_t da, std::size_t db) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  ComplexMatrix rho(da * db);
  double sum = 0.0;
  std::vector<double> q(3);
  for (auto& x : q) sum += (x = u(rng));
  for (double x : q) rho += (x / sum) * local(random_density(da, rng), random_density(db, rng));
  rho = 0.5 * (rho + rho.adjoint());
  return BipartiteState(scatent::DensityMatrix(rho), da, db);
}

/// Diagonal in the computational product basis with 1..dA-1 empty A rows;
/// a random fraction of the remaining entries is zeroed too.
inline BipartiteState diagonal_with_kernel(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim_a(2, 4), dim_b(1, 4);
  const std::size_t da = dim_a(rng), db = dim_b(rng);
  std::uniform_int_distribution<std::size_t> ker(1, da - 1);
  const std::size_t kernel_rows = ker(rng);
  std::uniform_real_distribution<double> u(0.05, 1.0), coin(0.0, 1.0);
  std::vector<double> w(da * db, 0.0);
  double sum = 0.0;
  for (std::size_t m = 0; m + kernel_rows < da; ++m) {
    double row = 0.0;
    for (std::size_t k = 0; k < db; ++k) row += (w[m * db + k] = coin(rng) < 0.3 ? 0.0 : u(rng));
    if (row == 0.0) row = (w[m * db] = 0.5);
    sum += row;
  }
  for (auto& x : w) x /= sum;
  return scatent::diagonal_state(w, da, db);
}

}  // namespace gen
