#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scatent/linalg.hpp"

namespace scatent {

/// First- and second-order T-matrix coefficients on a dA x dB product space.
struct TMatrixPair {
  ComplexMatrix t1;
  ComplexMatrix t2;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;

  /// Hermitian part (T2 + T2^dagger) / 2, the only piece of T2 that enters rho_out at O(lambda^2).
  ComplexMatrix t2_hermitian_part() const;
};

/// Gaussian Hermitian sample: real N(0,1) diagonal, (g1 + i g2)/2 off the diagonal.
ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed);

/// T2 = h2 + (i/2) t1 t1, the completion demanded by order-lambda^2 unitarity.
TMatrixPair complete_second_order(const ComplexMatrix& t1, const ComplexMatrix& h2, std::size_t dim_a,
                                  std::size_t dim_b, double tol = 1e-10);

/// S = exp(i lambda t1).
ComplexMatrix exact_s(const ComplexMatrix& t1, double lambda);

struct UnitarityReport {
  double t1_hermiticity_defect = 0.0;  // max |t1 - t1^dagger|
  double t2_constraint_defect = 0.0;   // max |t2 - t2^dagger - i t1 t1|
  double optical_defect = 0.0;         // max |i(T - T^dagger) + T T^dagger|, T = lambda t1 + lambda^2 t2
  bool consistent = false;             // both constraint defects within tol
};

UnitarityReport verify_unitarity(const TMatrixPair& pair, double lambda, double tol = 1e-10);

/// One listed element <a_row, b_row| T |a_col, b_col>.
struct TElement {
  std::size_t a_row = 0;
  std::size_t b_row = 0;
  std::size_t a_col = 0;
  std::size_t b_col = 0;
  cplx value;
};

struct ScenarioTSpec {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<TElement> elements;
};

/// Matrix holding exactly the listed elements and their Hermitian conjugates.
ComplexMatrix structured_t1(const ScenarioTSpec& spec, double tol = 1e-12);

/// Reads <m, mt| T |m', mt'> with the A index expressed in the columns of
/// `a_basis` and the B index in a per-A-index basis `b_bases[m]`
/// (pass the same matrix for every m for an ordinary product basis).
class TElementView {
 public:
  TElementView(const ComplexMatrix& t, std::size_t dim_a, std::size_t dim_b, const ComplexMatrix& a_basis,
               std::vector<ComplexMatrix> b_bases);

  /// Row B index read in the basis of `row_basis_a`, column B index in the basis of `col_basis_a`.
  cplx operator()(std::size_t m, std::size_t mt, std::size_t mp, std::size_t mtp) const;
  cplx element(std::size_t m, std::size_t mt, std::size_t mp, std::size_t mtp, std::size_t row_basis_a,
               std::size_t col_basis_a) const;

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }

 private:
  std::size_t dim_a_;
  std::size_t dim_b_;
  // blocks_[m * dA + mp] = <a_m| T |a_mp> as a dB x dB operator in the computational B basis.
  std::vector<ComplexMatrix> blocks_;
  std::vector<ComplexMatrix> b_bases_;
};

}  // namespace scatent
