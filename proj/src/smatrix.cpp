#include "scatent/smatrix.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>

#include "scatent/errors.hpp"

namespace scatent {

ComplexMatrix TMatrixPair::t2_hermitian_part() const { return 0.5 * (t2 + t2.adjoint()); }

ComplexMatrix random_hermitian(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = gauss(rng);
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double g1 = gauss(rng);
      const double g2 = gauss(rng);
      h(i, j) = cplx(g1, g2) / 2.0;
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

TMatrixPair complete_second_order(const ComplexMatrix& t1, const ComplexMatrix& h2, std::size_t dim_a,
                                  std::size_t dim_b, double tol) {
  if (t1.dim() != dim_a * dim_b || h2.dim() != t1.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "T-matrix dimensions do not match dA*dB");
  }
  if (!t1.is_hermitian(tol)) throw Error(ErrorCode::NonHermitianInput, "t1 is not Hermitian");
  if (!h2.is_hermitian(tol)) throw Error(ErrorCode::NonHermitianInput, "h2 is not Hermitian");
  TMatrixPair pair;
  pair.t1 = t1;
  pair.t2 = h2 + cplx(0.0, 0.5) * (t1 * t1);
  pair.dim_a = dim_a;
  pair.dim_b = dim_b;
  return pair;
}

ComplexMatrix exact_s(const ComplexMatrix& t1, double lambda) { return matexp_skew(t1, lambda); }

UnitarityReport verify_unitarity(const TMatrixPair& pair, double lambda, double tol) {
  const cplx i(0.0, 1.0);
  UnitarityReport rep;
  rep.t1_hermiticity_defect = max_abs_diff(pair.t1, pair.t1.adjoint());
  rep.t2_constraint_defect = (pair.t2 - pair.t2.adjoint() - i * (pair.t1 * pair.t1)).max_abs();
  const ComplexMatrix t = lambda * pair.t1 + (lambda * lambda) * pair.t2;
  const ComplexMatrix td = t.adjoint();
  rep.optical_defect = (i * (t - td) + t * td).max_abs();
  rep.consistent = rep.t1_hermiticity_defect <= tol && rep.t2_constraint_defect <= tol;
  return rep;
}

ComplexMatrix structured_t1(const ScenarioTSpec& spec, double tol) {
  const std::size_t da = spec.dim_a;
  const std::size_t db = spec.dim_b;
  std::map<std::pair<std::size_t, std::size_t>, cplx> assigned;
  auto assign = [&](std::size_t r, std::size_t c, cplx v) {
    auto [it, inserted] = assigned.emplace(std::make_pair(r, c), v);
    if (!inserted && std::abs(it->second - v) > tol) {
      throw Error(ErrorCode::ConflictingAssignment,
                  "element (" + std::to_string(r) + "," + std::to_string(c) +
                      ") assigned inconsistently with its Hermitian conjugate");
    }
  };
  for (const auto& e : spec.elements) {
    if (e.a_row >= da || e.a_col >= da || e.b_row >= db || e.b_col >= db) {
      throw Error(ErrorCode::DimensionMismatch, "structured element index out of range");
    }
    const std::size_t r = e.a_row * db + e.b_row;
    const std::size_t c = e.a_col * db + e.b_col;
    assign(r, c, e.value);
    assign(c, r, std::conj(e.value));
  }
  ComplexMatrix t(da * db);
  for (const auto& [rc, v] : assigned) t(rc.first, rc.second) = v;
  return t;
}

TElementView::TElementView(const ComplexMatrix& t, std::size_t dim_a, std::size_t dim_b,
                           const ComplexMatrix& a_basis, std::vector<ComplexMatrix> b_bases)
    : dim_a_(dim_a), dim_b_(dim_b), b_bases_(std::move(b_bases)) {
  if (t.dim() != dim_a * dim_b || a_basis.dim() != dim_a || b_bases_.size() != dim_a) {
    throw Error(ErrorCode::BasisMismatch, "T-element view bases do not match the product space");
  }
  // Rotate the A factor once: T' = (Ua (x) 1)^dagger T (Ua (x) 1).
  const ComplexMatrix rotated = conjugate_by(t, kron(a_basis, ComplexMatrix::identity(dim_b)));
  blocks_.reserve(dim_a * dim_a);
  for (std::size_t m = 0; m < dim_a; ++m)
    for (std::size_t mp = 0; mp < dim_a; ++mp) blocks_.push_back(b_block(rotated, dim_a, dim_b, m, mp));
}

cplx TElementView::element(std::size_t m, std::size_t mt, std::size_t mp, std::size_t mtp,
                           std::size_t row_basis_a, std::size_t col_basis_a) const {
  const ComplexMatrix& blk = blocks_[m * dim_a_ + mp];
  const ComplexMatrix& ub_row = b_bases_[row_basis_a];
  const ComplexMatrix& ub_col = b_bases_[col_basis_a];
  cplx s = 0.0;
  for (std::size_t k = 0; k < dim_b_; ++k) {
    const cplx left = std::conj(ub_row(k, mt));
    if (left == cplx{}) continue;
    for (std::size_t l = 0; l < dim_b_; ++l) s += left * blk(k, l) * ub_col(l, mtp);
  }
  return s;
}

cplx TElementView::operator()(std::size_t m, std::size_t mt, std::size_t mp, std::size_t mtp) const {
  return element(m, mt, mp, mtp, m, mp);
}

}  // namespace scatent
