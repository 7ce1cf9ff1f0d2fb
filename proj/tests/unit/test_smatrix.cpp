#include "doctest.h"
#include "oracles.hpp"
#include "scatent/errors.hpp"
#include "scatent/smatrix.hpp"

using namespace scatent;

TEST_CASE("random Hermitian ensemble") {
  const ComplexMatrix h = random_hermitian(5, 3);
  CHECK(h.is_hermitian(0.0));
  CHECK(max_abs_diff(h, random_hermitian(5, 3)) == 0.0);
  CHECK(max_abs_diff(h, random_hermitian(5, 4)) > 0.0);
  // Sample mean of the eigenvalue distribution sits near zero.
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (double e : oracle::eigenvalues(random_hermitian(8, seed))) {
      sum += e;
      ++count;
    }
  CHECK(std::abs(sum / static_cast<double>(count)) < 0.2);
}

TEST_CASE("second-order completion satisfies order-by-order unitarity") {
  const ComplexMatrix t1 = random_hermitian(4, 1);
  const ComplexMatrix h2 = random_hermitian(4, 2);
  const TMatrixPair pair = complete_second_order(t1, h2, 2, 2);
  CHECK(max_abs_diff(pair.t2_hermitian_part(), h2) < 1e-14);
  const UnitarityReport rep = verify_unitarity(pair, 1e-3);
  CHECK(rep.consistent);
  CHECK(rep.t2_constraint_defect < 1e-14);
  // What is left of the optical theorem is third order in lambda.
  const double d1 = verify_unitarity(pair, 1e-2).optical_defect;
  const double d2 = verify_unitarity(pair, 1e-3).optical_defect;
  CHECK(d1 / d2 == doctest::Approx(1000.0).epsilon(0.05));

  TMatrixPair broken = pair;
  broken.t2 = broken.t2 + cplx(0.0, 1.0) * ComplexMatrix::identity(4);
  CHECK_FALSE(verify_unitarity(broken, 1e-3).consistent);

  ComplexMatrix bad = t1;
  bad(0, 1) += 1.0;
  CHECK_THROWS_AS(complete_second_order(bad, h2, 2, 2), Error);
  CHECK_THROWS_AS(complete_second_order(t1, h2, 3, 2), Error);
}

TEST_CASE("exact S expands like 1 + i l T1 + l^2 (i T2)") {
  const ComplexMatrix t1 = random_hermitian(4, 8);
  const TMatrixPair pair = complete_second_order(t1, ComplexMatrix::zeros(4), 2, 2);
  const double l = 1e-3;
  const cplx i(0.0, 1.0);
  const ComplexMatrix approx = ComplexMatrix::identity(4) + (i * l) * pair.t1 + (i * l * l) * pair.t2;
  const ComplexMatrix s = exact_s(t1, l);
  CHECK(s.is_unitary(1e-12));
  CHECK(max_abs_diff(s, approx) < 10.0 * l * l * l);
}

TEST_CASE("structured t1 closes under Hermitian conjugation") {
  ScenarioTSpec spec{2, 2, {{0, 1, 1, 0, cplx(0.7, 0.2)}, {1, 1, 1, 1, 0.3}}};
  const ComplexMatrix t = structured_t1(spec);
  CHECK(t.is_hermitian(0.0));
  CHECK(t(1, 2) == cplx(0.7, 0.2));
  CHECK(t(2, 1) == cplx(0.7, -0.2));
  CHECK(t(3, 3) == cplx(0.3, 0.0));
  // Listing both halves consistently is fine.
  spec.elements.push_back({1, 0, 0, 1, cplx(0.7, -0.2)});
  CHECK_NOTHROW(structured_t1(spec));
  spec.elements.push_back({1, 0, 0, 1, cplx(0.1, 0.0)});
  try {
    structured_t1(spec);
    FAIL("expected ConflictingAssignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConflictingAssignment);
  }
  ScenarioTSpec diag{2, 2, {{0, 0, 0, 0, cplx(0.0, 1.0)}}};
  CHECK_THROWS_AS(structured_t1(diag), Error);
}

TEST_CASE("element view reads the requested bases") {
  const ComplexMatrix t = random_hermitian(6, 12);
  const ComplexMatrix id_a = ComplexMatrix::identity(2);
  const ComplexMatrix id_b = ComplexMatrix::identity(3);
  const TElementView plain(t, 2, 3, id_a, {id_b, id_b});
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t mp = 0; mp < 2; ++mp)
        for (std::size_t l = 0; l < 3; ++l) CHECK(plain(m, k, mp, l) == t(m * 3 + k, mp * 3 + l));

  // Rotated bases: element equals (U_A x U_B)^dagger T (U_A x U_B).
  const ComplexMatrix ua = oracle::random_unitary(2, 1);
  const ComplexMatrix ub = oracle::random_unitary(3, 2);
  const TElementView rot(t, 2, 3, ua, {ub, ub});
  const ComplexMatrix u = oracle::kron(ua, ub);
  const ComplexMatrix ref = u.adjoint() * t * u;
  double d = 0.0;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 6; ++c) d = std::max(d, std::abs(rot(r / 3, r % 3, c / 3, c % 3) - ref(r, c)));
  CHECK(d < 1e-13);
}
