#include <cmath>

#include "../common/generators.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "scatent/errors.hpp"
#include "scatent/oracle.hpp"
#include "scatent/perturb.hpp"
#include "scatent/smatrix.hpp"

using namespace scatent;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("evolve_exact basics") {
  const BipartiteState st(DensityMatrix(oracle::random_density(4, 1)), 2, 2);
  CHECK(max_abs_diff(evolve_exact(st, ComplexMatrix::identity(4)).matrix(), st.matrix()) == 0.0);

  ComplexMatrix swap(4);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = swap(3, 3) = 1.0;
  const ComplexMatrix out = evolve_exact(st, swap).matrix();
  CHECK(out(0, 0) == st.matrix()(1, 1));
  CHECK(out(0, 2) == st.matrix()(1, 2));

  const ComplexMatrix u = oracle::random_unitary(4, 3);
  const auto before = oracle::eigenvalues(st.matrix());
  const auto after = oracle::eigenvalues(evolve_exact(st, u).matrix());
  CHECK(oracle::max_diff(before, after) < 1e-10);

  CHECK(code_of([&] { evolve_exact(st, 2.0 * u); }) == ErrorCode::NonUnitary);
}

TEST_CASE("exact entropy change matches an Eigen-only evaluation") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    const BipartiteState st = gen::generic_state(rng, 2, 3);
    const ComplexMatrix t = random_hermitian(6, i);
    for (double l : {1e-3, 1e-1, 0.5})
      CHECK(exact_delta_entropy(st, t, l) ==
            doctest::Approx(oracle::delta_entropy(st.matrix(), t, l, 2, 3)).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("exact entropy change: null and trivial cases") {
  const BipartiteState st = product_state(ComplexMatrix::diagonal({0.6, 0.4}), ComplexMatrix::diagonal({0.3, 0.7}));
  const ComplexMatrix t = oracle::kron(random_hermitian(2, 5), ComplexMatrix::identity(2));
  CHECK(std::abs(exact_delta_entropy(st, t, 1e-2)) <= 5e-12);
  CHECK(exact_delta_entropy(st, ComplexMatrix::zeros(4), 1e-2) == 0.0);
  CHECK(code_of([&] { exact_delta_entropy(st, t, 0.0); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { exact_delta_entropy(st, t, 0.6); }) == ErrorCode::ConfigError);
}

TEST_CASE("pure product: single transition gives the log law") {
  const std::vector<cplx> amp{1.0, 0.0, 0.0, 0.0};
  const BipartiteState st = pure_state(amp, 2, 2);
  const cplx tv(0.8, 0.3);
  const ComplexMatrix t = structured_t1({2, 2, {{0, 0, 1, 1, tv}}});
  const double l = 1e-3;
  const double law = std::norm(tv) * l * l * std::log(1.0 / (l * l));
  CHECK(exact_delta_entropy(st, t, l) == doctest::Approx(law).epsilon(0.1));
}

TEST_CASE("evolution record sanity") {
  std::mt19937_64 rng(9);
  const BipartiteState st = gen::generic_state(rng, 3, 2);
  const EvolutionRecord rec = evolve_record(st, random_hermitian(6, 1), 0.1);
  CHECK(rec.full_entropy_change <= 1e-9);
  CHECK(rec.spectrum_defect <= 1e-9);
  CHECK(rec.trace_defect <= 1e-12);
  CHECK(rec.delta_s_a == doctest::Approx(exact_delta_entropy(st, random_hermitian(6, 1), 0.1)));
}

TEST_CASE("fit recovers synthetic coefficients") {
  const auto grid = default_lambda_grid();
  std::vector<double> ds;
  const double a = 0.3, b = 1.25, c = -0.7;
  for (double l : grid) ds.push_back(a * l + b * l * l * std::log(1.0 / (l * l)) + c * l * l);
  const SweepFit f = fit_coefficients(grid, ds);
  CHECK(f.a == doctest::Approx(a).epsilon(1e-10));
  CHECK(f.b == doctest::Approx(b).epsilon(1e-8));
  CHECK(f.c == doctest::Approx(c).epsilon(1e-8));
  CHECK(f.residual_max < 1e-12 * std::abs(ds.front()));
  CHECK(f.condition_estimate > 1.0);
  CHECK(f.condition_estimate < 1e8);
  REQUIRE(f.points.size() == grid.size());
  CHECK(f.points[3].model == doctest::Approx(ds[3]));
  // A tight condition limit trips the guard.
  CHECK(code_of([&] { fit_coefficients(grid, ds, 2.0); }) == ErrorCode::IllConditionedFit);
}

TEST_CASE("grid validation") {
  auto bad = [](std::vector<double> g) { return code_of([&] { validate_grid(g); }) == ErrorCode::ConfigError; };
  CHECK(bad({1e-2, 1e-3, 1e-4, 1e-5, 1e-6}));                 // too few
  CHECK(bad({1e-2, 8e-3, 6e-3, 4e-3, 2e-3, 1e-3}));           // one decade
  CHECK(bad({1e-2, 3e-3, 3e-3, 3e-4, 1e-4, 1e-5}));           // not strictly decreasing
  CHECK(bad({0.5, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}));            // above 0.1
  CHECK(bad({1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 0.0}));            // zero
  CHECK_NOTHROW(validate_grid(default_lambda_grid()));
}

TEST_CASE("fit of a full-rank scenario") {
  const BipartiteState st = product_state(ComplexMatrix::diagonal({0.75, 0.25}), ComplexMatrix::diagonal({0.0, 1.0}));
  const ComplexMatrix t = structured_t1({2, 2, {{0, 1, 1, 0, 0.7}}});
  const SweepFit f = sweep_and_fit(st, t);
  const double c = full_rank_second_order(st, t, a_spectral_data(st));
  CHECK(std::abs(f.a) <= 1e-8);
  CHECK(std::abs(f.b) <= 0.02 * std::abs(f.c));
  CHECK(f.c == doctest::Approx(c).epsilon(0.02));
}

TEST_CASE("fit under t1 -> -t1") {
  const std::vector<cplx> amp{std::sqrt(0.7), 0.0, 0.0, std::sqrt(0.3)};
  const BipartiteState st = pure_state(amp, 2, 2);
  const ComplexMatrix t = structured_t1({2, 2, {{0, 0, 1, 1, cplx(0.0, 0.5)}}});
  const SweepFit fp = sweep_and_fit(st, t);
  const SweepFit fm = sweep_and_fit(st, -t);
  CHECK(fp.a == doctest::Approx(first_order_entropy(st, t)).epsilon(0.01));
  CHECK(fm.a == doctest::Approx(-fp.a).epsilon(1e-6));
  CHECK(fm.c == doctest::Approx(fp.c).epsilon(0.02));
  CHECK(std::abs(fm.b - fp.b) <= 0.02 * std::abs(fp.c));
}

TEST_CASE("sweep records cover the grid") {
  const BipartiteState st = product_state(ComplexMatrix::diagonal({0.6, 0.4}), ComplexMatrix::diagonal({0.5, 0.5}));
  const auto grid = default_lambda_grid();
  const auto recs = sweep_records(st, random_hermitian(4, 3), grid);
  REQUIRE(recs.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(recs[i].lambda == grid[i]);
}
