#include "scatent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scatent/errors.hpp"

namespace scatent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::ConflictingAssignment: return "ConflictingAssignment";
    case ErrorCode::DegeneracyLeak: return "DegeneracyLeak";
    case ErrorCode::IllConditionedSpectrum: return "IllConditionedSpectrum";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EnergyViolation: return "EnergyViolation";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::IllConditionedFit: return "IllConditionedFit";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "entry count " + std::to_string(data_.size()) + " does not match dim^2 for dim " +
                    std::to_string(dim_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix literal is not square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  return max_abs_diff(adjoint() * (*this), identity(dim_)) <= tol;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "max_abs_diff");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
  return m;
}

ComplexMatrix Spectrum::reconstruct() const {
  const std::size_t n = eigenvalues.size();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += eigenvectors(i, k) * eigenvalues[k] * std::conj(eigenvectors(j, k));
      out(i, j) = s;
    }
  return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Zeroes a(p,q) with V = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on
// columns p,q; a <- V^H a V, u <- u V.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& u, std::size_t p, std::size_t q) {
  const cplx g = a(p, q);
  const double mag = std::abs(g);
  if (mag == 0.0) return;
  const cplx phase = g / mag;
  const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx v_qp = -s * std::conj(phase);
  const cplx v_qq = c * std::conj(phase);
  const std::size_t n = a.dim();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = c * akp + v_qp * akq;
    a(k, q) = s * akp + v_qq * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = c * apk + std::conj(v_qp) * aqk;
    a(q, k) = s * apk + std::conj(v_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (std::size_t k = 0; k < n; ++k) {
    const cplx ukp = u(k, p);
    const cplx ukq = u(k, q);
    u(k, p) = c * ukp + v_qp * ukq;
    u(k, q) = s * ukp + v_qq * ukq;
  }
}

void sweep(ComplexMatrix& a, ComplexMatrix& u) {
  const std::size_t n = a.dim();
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, u, p, q);
}

// Modified Gram-Schmidt on the columns, in place.
void orthonormalize_columns(ComplexMatrix& u) {
  const std::size_t n = u.dim();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(u(i, j)) * u(i, k);
      for (std::size_t i = 0; i < n; ++i) u(i, k) -= dot * u(i, j);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(u(i, k));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) u(i, k) /= norm;
  }
}

}  // namespace

Spectrum eig_hermitian(const ComplexMatrix& h, const LinalgConfig& cfg) {
  const std::size_t n = h.dim();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "eig_hermitian on an empty matrix");
  const double scale = h.max_abs();
  if (!h.is_hermitian(cfg.hermitian_tol * scale)) {
    throw Error(ErrorCode::NonHermitianInput, "eig_hermitian input deviates from its adjoint");
  }

  ComplexMatrix a = h;
  // Symmetrize so rounding-level asymmetry cannot bias the rotations.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = avg;
      a(j, i) = std::conj(avg);
    }
  }
  ComplexMatrix u = ComplexMatrix::identity(n);
  const double threshold = cfg.jacobi_threshold * h.frobenius_norm();

  int sweeps = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweeps == cfg.max_sweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi sweep limit " + std::to_string(cfg.max_sweeps) + " exceeded");
    }
    sweep(a, u);
    ++sweeps;
  }
  // One extra pass pushes the residual coupling well below the stopping threshold.
  if (sweeps > 0) sweep(a, u);
  orthonormalize_columns(u);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors = ComplexMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    spec.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, k) = u(i, order[k]);
  }
  return spec;
}

ComplexMatrix matexp_skew(const ComplexMatrix& h, double lambda, const LinalgConfig& cfg) {
  const Spectrum spec = eig_hermitian(h, cfg);
  const std::size_t n = h.dim();
  std::vector<cplx> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, lambda * spec.eigenvalues[k]);
  ComplexMatrix out(n);
  const ComplexMatrix& u = spec.eigenvectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * phases[k] * std::conj(u(j, k));
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, const LinalgConfig& cfg) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da * db > cfg.max_dim) {
    throw Error(ErrorCode::DimensionOverflow, "kron dimension " + std::to_string(da * db) +
                                                  " exceeds maximum " + std::to_string(cfg.max_dim));
  }
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

namespace {
void require_product_dim(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  if (dim_a == 0 || dim_b == 0 || m.dim() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "operator of dimension " + std::to_string(m.dim()) +
                                                  " is not " + std::to_string(dim_a) + "x" +
                                                  std::to_string(dim_b));
  }
}
}  // namespace

ComplexMatrix partial_trace_b(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  require_product_dim(m, dim_a, dim_b);
  ComplexMatrix out(dim_a);
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < dim_b; ++k) s += m(i * dim_b + k, j * dim_b + k);
      out(i, j) = s;
    }
  return out;
}

ComplexMatrix partial_trace_a(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b) {
  require_product_dim(m, dim_a, dim_b);
  ComplexMatrix out(dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < dim_a; ++i) s += m(i * dim_b + k, i * dim_b + l);
      out(k, l) = s;
    }
  return out;
}

ComplexMatrix b_block(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, std::size_t a_row,
                      std::size_t a_col) {
  require_product_dim(m, dim_a, dim_b);
  ComplexMatrix out(dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l) out(k, l) = m(a_row * dim_b + k, a_col * dim_b + l);
  return out;
}

std::vector<cplx> column(const ComplexMatrix& m, std::size_t k) {
  std::vector<cplx> v(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) v[i] = m(i, k);
  return v;
}

ComplexMatrix conjugate_by(const ComplexMatrix& m, const ComplexMatrix& u) { return u.adjoint() * m * u; }

}  // namespace scatent
