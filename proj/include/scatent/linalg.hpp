#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace scatent {

using cplx = std::complex<double>;

struct LinalgConfig {
  double hermitian_tol = 1e-10;   // relative to max |H_ij|
  int max_sweeps = 100;
  double jacobi_threshold = 1e-14;  // off-diagonal Frobenius, relative to ||H||_F
  std::size_t max_dim = 4096;
};

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigenpairs of a Hermitian matrix. Columns of `eigenvectors` are the
/// orthonormal eigenvectors, ordered like the ascending `eigenvalues`.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi. Degenerate eigenvalues come back in an arbitrary
/// orthonormal basis of their eigenspace.
Spectrum eig_hermitian(const ComplexMatrix& h, const LinalgConfig& cfg = {});

/// exp(i * lambda * H) for Hermitian H, via the spectral decomposition.
ComplexMatrix matexp_skew(const ComplexMatrix& h, double lambda, const LinalgConfig& cfg = {});

/// Entry ((i*dB + k), (j*dB + l)) = A_ij * B_kl.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, const LinalgConfig& cfg = {});

/// Trace over the second (minor-index) factor of an (dA*dB)-dimensional operator.
ComplexMatrix partial_trace_b(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);
/// Trace over the first (major-index) factor.
ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b);

/// Block <a|M|a'> as a dB x dB operator, for product-space M.
ComplexMatrix b_block(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, std::size_t a_row,
                      std::size_t a_col);

/// Column k of `m` as a vector.
std::vector<cplx> column(const ComplexMatrix& m, std::size_t k);

/// U^dagger M U.
ComplexMatrix conjugate_by(const ComplexMatrix& m, const ComplexMatrix& u);

}  // namespace scatent
