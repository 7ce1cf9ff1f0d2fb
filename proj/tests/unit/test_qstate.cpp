#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "scatent/errors.hpp"
#include "scatent/qstate.hpp"

using namespace scatent;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix::diagonal({0.25, 0.75})));
  CHECK(code_of([] { DensityMatrix(ComplexMatrix::diagonal({0.5, 0.6})); }) == ErrorCode::InvalidDensity);
  CHECK(code_of([] { DensityMatrix(ComplexMatrix::diagonal({1.2, -0.2})); }) == ErrorCode::InvalidDensity);
  ComplexMatrix nh = ComplexMatrix::diagonal({0.5, 0.5});
  nh(0, 1) = 0.1;
  CHECK(code_of([&] { DensityMatrix{nh}; }) == ErrorCode::InvalidDensity);
  CHECK(code_of([] { BipartiteState(DensityMatrix(ComplexMatrix::diagonal({0.5, 0.5})), 2, 2); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("entropy of diagonal states") {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  double expect = 0.0;
  for (double x : p) expect -= x * std::log(x);
  CHECK(von_neumann_entropy(DensityMatrix(ComplexMatrix::diagonal(p))) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix(ComplexMatrix::diagonal({0.25, 0.25, 0.25, 0.25}))) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix(ComplexMatrix::diagonal({1.0, 0.0}))) == 0.0);
  // Eigenvalues at or below the cutoff contribute nothing.
  const std::vector<double> tiny{1e-13, 1.0 - 1e-13};
  CHECK(entropy_of_spectrum(tiny, 1e-12) == doctest::Approx(-(1.0 - 1e-13) * std::log(1.0 - 1e-13)));
  CHECK(entropy_of_spectrum(tiny, 0.0) > entropy_of_spectrum(tiny, 1e-12));
}

TEST_CASE("entropy of random density matrices matches Eigen") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix r = oracle::random_density(6, seed);
    CHECK(von_neumann_entropy(DensityMatrix(r)) == doctest::Approx(oracle::entropy(r)).epsilon(1e-12));
  }
}

TEST_CASE("pure states have equal subsystem entropies") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<cplx> amp(6);
  double n = 0.0;
  for (auto& a : amp) {
    a = cplx(g(rng), g(rng));
    n += std::norm(a);
  }
  for (auto& a : amp) a /= std::sqrt(n);
  const BipartiteState st = pure_state(amp, 2, 3);
  const double sa = von_neumann_entropy(reduced_a(st));
  const double sb = von_neumann_entropy(reduced_b(st));
  CHECK(sa == doctest::Approx(sb).epsilon(1e-12));
  CHECK(sa > 0.1);
  CHECK(von_neumann_entropy(st.rho()) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("reduced states of a product") {
  const ComplexMatrix a = oracle::random_density(3, 1);
  const ComplexMatrix b = oracle::random_density(2, 2);
  const BipartiteState st = product_state(a, b);
  CHECK(max_abs_diff(reduced_a(st).matrix(), a) < 1e-15);
  CHECK(max_abs_diff(reduced_b(st).matrix(), b) < 1e-15);
}

TEST_CASE("spectral data: kernel and degeneracy classes") {
  const BipartiteState st = diagonal_state(std::vector<double>{0.25, 0.25, 0.0, 0.0, 0.3, 0.2}, 3, 2);
  const ASpectralData d = a_spectral_data(st);
  REQUIRE(d.dim() == 3);
  CHECK(d.kernel == std::vector<std::size_t>{0});
  REQUIRE(d.degeneracy_classes.size() == 2);
  CHECK(d.degeneracy_classes[0] == std::vector<std::size_t>{0});
  CHECK(d.degeneracy_classes[1] == std::vector<std::size_t>{1, 2});
  CHECK(d.class_of == std::vector<std::size_t>{0, 1, 1});
  CHECK_FALSE(d.has_near_kernel(1e-6));

  const BipartiteState near = diagonal_state(std::vector<double>{1.0 - 1e-8, 1e-8}, 2, 1);
  const ASpectralData dn = a_spectral_data(near);
  CHECK(dn.kernel.empty());
  CHECK(dn.has_near_kernel(1e-6));
}

TEST_CASE("diagonal_state rejects bad weights") {
  CHECK(code_of([] { diagonal_state(std::vector<double>{0.5, 0.4}, 2, 1); }) == ErrorCode::InvalidDensity);
  CHECK(code_of([] { diagonal_state(std::vector<double>{0.5, 0.5}, 2, 2); }) == ErrorCode::DimensionMismatch);
}
