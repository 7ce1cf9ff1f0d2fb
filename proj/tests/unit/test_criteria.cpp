#include <cmath>

#include "../common/generators.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "scatent/criteria.hpp"
#include "scatent/errors.hpp"
#include "scatent/smatrix.hpp"

using namespace scatent;

namespace {

BipartiteState cq_example() {
  // 0.6 |0><0| (x) |0><0| + 0.4 |1><1| (x) |+><+|
  ComplexMatrix rho(4);
  rho(0, 0) = 0.6;
  const double h = 0.4 * 0.5;
  rho(2, 2) = h;
  rho(2, 3) = h;
  rho(3, 2) = h;
  rho(3, 3) = h;
  return BipartiteState(DensityMatrix(rho), 2, 2);
}

}  // namespace

TEST_CASE("commutation holds for product and special-form states") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const BipartiteState st = gen::special_form_state(rng, 3, 2, i % 2);
    const ASpectralData d = a_spectral_data(st);
    CHECK(check_commutation(st, d, 1e-10).ok);
    const SpecialFormResult sf = check_special_form(st, 1e-10);
    CHECK(sf.ok);
    REQUIRE(sf.basis.has_value());
    // The returned basis really diagonalizes rho.
    const ComplexMatrix u = oracle::kron(sf.basis->a_basis, sf.basis->b_basis);
    const ComplexMatrix diag = u.adjoint() * st.matrix() * u;
    double off = 0.0;
    for (std::size_t r = 0; r < 6; ++r)
      for (std::size_t c = 0; c < 6; ++c)
        if (r != c) off = std::max(off, std::abs(diag(r, c)));
    CHECK(off < 1e-10);
  }
}

TEST_CASE("entangled and generic states fail both checks") {
  const std::vector<cplx> bell{std::sqrt(0.7), 0.0, 0.0, std::sqrt(0.3)};
  const BipartiteState st = pure_state(bell, 2, 2);
  const CommutationResult c = check_commutation(st, a_spectral_data(st), 1e-10);
  CHECK_FALSE(c.ok);
  CHECK(c.max_defect > 0.1);
  CHECK_FALSE(c.witnesses.empty());
  CHECK_FALSE(check_special_form(st, 1e-10).ok);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    const BipartiteState g = gen::generic_state(rng, 2, 3);
    CHECK_FALSE(check_commutation(g, a_spectral_data(g), 1e-10).ok);
    CHECK_FALSE(check_special_form(g, 1e-10).ok);
  }
}

TEST_CASE("the two criteria are not equivalent in general") {
  // Special form but not commutation: the degenerate class of rho_A mixes
  // A directions whose B blocks differ.
  const BipartiteState s0 = diagonal_state(std::vector<double>{0.5, 0.0, 0.0, 0.5}, 2, 2);
  CHECK(check_special_form(s0, 1e-10).ok);
  CHECK_FALSE(check_commutation(s0, a_spectral_data(s0), 1e-10).ok);

  // Commutation but not special form: nondegenerate rho_A, noncommuting B blocks.
  const BipartiteState s1 = cq_example();
  CHECK(check_commutation(s1, a_spectral_data(s1), 1e-10).ok);
  CHECK_FALSE(check_special_form(s1, 1e-10).ok);
}

TEST_CASE("working basis diagonalizes each B block") {
  const BipartiteState st = cq_example();
  const ASpectralData d = a_spectral_data(st);
  const WorkingBasis wb = working_basis(st, d, 1e-10);
  CHECK_FALSE(wb.common_b_basis);
  CHECK(wb.block_offdiagonal < 1e-12);
  for (std::size_t m = 0; m < 2; ++m) {
    const ComplexMatrix r = conjugate_by(wb.b_blocks[m], wb.b_bases[m]);
    CHECK(std::abs(r(0, 1)) < 1e-12);
  }
  double total = 0.0;
  for (const auto& w : wb.weights)
    for (double x : w) total += x;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("t criterion and combined verdict") {
  const std::vector<cplx> prod{1.0, 0.0, 0.0, 0.0};
  const BipartiteState st = pure_state(prod, 2, 2);
  const ComplexMatrix both = structured_t1({2, 2, {{0, 0, 1, 1, 0.5}}});
  CHECK(classify(st, both, {}).overall == Guarantee::StrictIncrease);

  // Couples the kernel but acts on B as a multiple of the identity.
  const ComplexMatrix a_only = structured_t1({2, 2, {{0, 0, 1, 0, 0.5}, {0, 1, 1, 1, 0.5}}});
  const GuaranteeVerdict v = classify(st, a_only, {});
  CHECK(v.t_mixes_kernel);
  CHECK_FALSE(v.t_nontrivial_on_b);
  CHECK(v.overall == Guarantee::NonNegativeAtLogOrder);

  // Never touches the kernel.
  const ComplexMatrix b_only = structured_t1({2, 2, {{0, 0, 0, 1, 0.5}}});
  CHECK(classify(st, b_only, {}).overall == Guarantee::NonNegativeAtLogOrder);
  CHECK_FALSE(classify(st, b_only, {}).t_mixes_kernel);

  // Full rank: no guarantee.
  const BipartiteState fr = diagonal_state(std::vector<double>{0.3, 0.2, 0.4, 0.1}, 2, 2);
  CHECK(classify(fr, both, {}).overall == Guarantee::NoGuarantee);
  CHECK(combine_verdict(true, false, true, true) == Guarantee::NoGuarantee);
  CHECK(combine_verdict(false, true, true, true) == Guarantee::NoGuarantee);
  CHECK(combine_verdict(true, true, true, false) == Guarantee::NonNegativeAtLogOrder);
}

TEST_CASE("B nontriviality is judged on the support of R_m") {
  // B pure |0>: only the row through |0> matters.
  const BipartiteState st = product_state(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({1.0, 0.0}));
  // <0,0|T|1,0> and <0,1|T|1,1> differ, but row <0,1| has no weight.
  const ComplexMatrix t = structured_t1({2, 2, {{0, 0, 1, 0, 0.5}, {0, 1, 1, 1, 0.2}}});
  CHECK_FALSE(classify(st, t, {}).t_nontrivial_on_b);
}

TEST_CASE("mismatched spectral data is rejected") {
  const BipartiteState st = diagonal_state(std::vector<double>{0.5, 0.5}, 2, 1);
  const BipartiteState other = diagonal_state(std::vector<double>{0.2, 0.3, 0.5}, 3, 1);
  try {
    check_commutation(st, a_spectral_data(other), 1e-10);
    FAIL("expected BasisMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BasisMismatch);
  }
}
