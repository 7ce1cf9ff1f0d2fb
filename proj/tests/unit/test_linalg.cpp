#include "doctest.h"
#include "oracles.hpp"
#include "scatent/errors.hpp"
#include "scatent/linalg.hpp"
#include "scatent/smatrix.hpp"

using namespace scatent;

TEST_CASE("eigensolver matches characteristic polynomial roots") {
  for (std::uint64_t seed : {1u, 2u, 3u, 17u}) {
    const ComplexMatrix h = random_hermitian(4, seed);
    const Spectrum s = eig_hermitian(h);
    const auto roots = oracle::charpoly_roots(h);
    CHECK(oracle::max_diff(s.eigenvalues, roots) < 1e-8);
  }
}

TEST_CASE("eigensolver agrees with Eigen and reconstructs") {
  for (std::size_t n : {1u, 2u, 5u, 9u, 16u}) {
    const ComplexMatrix h = random_hermitian(n, 100 + n);
    const Spectrum s = eig_hermitian(h);
    CHECK(oracle::max_diff(s.eigenvalues, oracle::eigenvalues(h)) < 1e-12);
    CHECK(max_abs_diff(s.reconstruct(), h) < 1e-12);
    CHECK(s.eigenvectors.is_unitary(1e-12));
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
  }
}

TEST_CASE("eigensolver on degenerate and diagonal input") {
  const ComplexMatrix d = ComplexMatrix::diagonal({0.5, 0.0, 0.5, 0.25});
  const Spectrum s = eig_hermitian(d);
  CHECK(oracle::max_diff(s.eigenvalues, {0.0, 0.25, 0.5, 0.5}) < 1e-15);
  // Degenerate after a unitary rotation.
  const ComplexMatrix u = oracle::random_unitary(4, 9);
  const ComplexMatrix r = u * d * u.adjoint();
  const Spectrum sr = eig_hermitian(r);
  CHECK(oracle::max_diff(sr.eigenvalues, {0.0, 0.25, 0.5, 0.5}) < 1e-13);
  CHECK(sr.eigenvectors.is_unitary(1e-12));
}

TEST_CASE("eigensolver errors") {
  ComplexMatrix h = random_hermitian(3, 4);
  h(0, 1) += 0.1;
  CHECK_THROWS_AS(eig_hermitian(h), Error);
  try {
    eig_hermitian(h);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
  LinalgConfig cfg;
  cfg.max_sweeps = 1;
  try {
    eig_hermitian(random_hermitian(12, 5), cfg);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("kron matches the index formula") {
  const ComplexMatrix a = random_hermitian(2, 11) * cplx(0.3, 0.7);
  const ComplexMatrix b = random_hermitian(3, 12);
  CHECK(max_abs_diff(kron(a, b), oracle::kron(a, b)) == 0.0);
  const ComplexMatrix c = random_hermitian(2, 13);
  CHECK(max_abs_diff(kron(c, a), oracle::kron(c, a)) == 0.0);

  LinalgConfig cfg;
  cfg.max_dim = 5;
  try {
    kron(a, b, cfg);
    FAIL("expected DimensionOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionOverflow);
  }
}

TEST_CASE("partial traces match index sums") {
  const ComplexMatrix rho = oracle::random_density(6, 21);
  CHECK(max_abs_diff(partial_trace_b(rho, 2, 3), oracle::ptrace_b(rho, 2, 3)) < 1e-15);
  CHECK(max_abs_diff(partial_trace_a(rho, 2, 3), oracle::ptrace_a(rho, 2, 3)) < 1e-15);
  CHECK(max_abs_diff(partial_trace_b(rho, 3, 2), oracle::ptrace_b(rho, 3, 2)) < 1e-15);
  // tr_B (A x B) = tr(B) A
  const ComplexMatrix a = oracle::random_density(2, 1);
  const ComplexMatrix b = oracle::random_density(3, 2);
  CHECK(max_abs_diff(partial_trace_b(kron(a, b), 2, 3), a) < 1e-15);
  CHECK(max_abs_diff(partial_trace_a(kron(a, b), 2, 3), b) < 1e-15);
}

TEST_CASE("matrix exponential is unitary and matches Eigen") {
  const ComplexMatrix h = random_hermitian(6, 31);
  for (double l : {1e-5, 1e-2, 0.5}) {
    const ComplexMatrix s = matexp_skew(h, l);
    CHECK(s.is_unitary(1e-12));
    CHECK(max_abs_diff(s, oracle::expi(h, l)) < 1e-12);
  }
  // Power series at small lambda.
  const double l = 1e-3;
  const cplx i(0.0, 1.0);
  const ComplexMatrix series = ComplexMatrix::identity(6) + (i * l) * h - (0.5 * l * l) * (h * h) -
                               (i * (l * l * l / 6.0)) * (h * h * h);
  CHECK(max_abs_diff(matexp_skew(h, l), series) < 1e-11);
}

TEST_CASE("basic matrix algebra") {
  const ComplexMatrix a{{1.0, cplx(0, 2)}, {3.0, 4.0}};
  const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix ab = a * b;
  CHECK(ab(0, 0) == cplx(0, 2));
  CHECK(ab(1, 1) == cplx(3, 0));
  CHECK(a.trace() == cplx(5, 0));
  CHECK(a.adjoint()(0, 1) == cplx(3, 0));
  CHECK(a.adjoint()(1, 0) == cplx(0, -2));
  CHECK(commutator(b, b).max_abs() == 0.0);
  CHECK(b.is_unitary(0.0));
  CHECK_FALSE(a.is_hermitian(1e-12));
  CHECK(conjugate_by(a, ComplexMatrix::identity(2)).max_abs() == a.max_abs());
}
