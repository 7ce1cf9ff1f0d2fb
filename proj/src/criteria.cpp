#include "scatent/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scatent/errors.hpp"
#include "scatent/smatrix.hpp"

namespace scatent {

std::string to_string(Guarantee g) {
  switch (g) {
    case Guarantee::StrictIncrease: return "StrictIncrease";
    case Guarantee::NonNegativeAtLogOrder: return "NonNegativeAtLogOrder";
    case Guarantee::NoGuarantee: return "NoGuarantee";
  }
  return "NoGuarantee";
}

namespace {

// Fixed pseudo-random coefficients; any generic choice works for the
// simultaneous-diagonalization trick, a fixed one keeps results reproducible.
std::vector<cplx> generic_coefficients(std::size_t count) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<cplx> c(count);
  for (auto& z : c) {
    const double re = u(rng);
    const double im = u(rng) - 1.0;
    z = cplx(re, im);
  }
  return c;
}

double max_offdiagonal(const ComplexMatrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j)
      if (i != j) d = std::max(d, std::abs(m(i, j)));
  return d;
}

ComplexMatrix outer(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  ComplexMatrix m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) m(i, j) = x[i] * std::conj(y[j]);
  return m;
}

void require_matching(const BipartiteState& state, const ASpectralData& adata) {
  if (adata.dim() != state.dim_a()) {
    throw Error(ErrorCode::BasisMismatch, "spectral data dimension " + std::to_string(adata.dim()) +
                                              " does not match dA = " + std::to_string(state.dim_a()));
  }
}

// Hermitian generic combination sum_k (c_k X_k + conj(c_k) X_k^dagger) / 2.
ComplexMatrix hermitian_combination(const std::vector<ComplexMatrix>& family) {
  const auto coeffs = generic_coefficients(family.size());
  ComplexMatrix h(family.front().dim());
  for (std::size_t k = 0; k < family.size(); ++k) {
    h += coeffs[k] * family[k];
    h += std::conj(coeffs[k]) * family[k].adjoint();
  }
  return 0.5 * h;
}

}  // namespace

CommutationResult check_commutation(const BipartiteState& state, const ASpectralData& adata, double tol) {
  require_matching(state, adata);
  const std::size_t db = state.dim_b();
  const ComplexMatrix id_b = ComplexMatrix::identity(db);
  const ComplexMatrix& u = adata.spectrum.eigenvectors;
  CommutationResult res;
  res.ok = true;
  for (const auto& cls : adata.degeneracy_classes) {
    for (std::size_t m : cls) {
      const auto um = column(u, m);
      for (std::size_t mp : cls) {
        const ComplexMatrix x = kron(outer(um, column(u, mp)), id_b);
        const double defect = commutator(x, state.matrix()).max_abs();
        res.max_defect = std::max(res.max_defect, defect);
        if (defect > tol) {
          res.ok = false;
          res.witnesses.push_back({"commutator", {m, mp}, defect});
        }
      }
    }
  }
  return res;
}

SpecialFormResult check_special_form(const BipartiteState& state, double tol) {
  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  const ComplexMatrix& rho = state.matrix();

  // A-operators F_kl = <., k| rho |., l>.
  std::vector<ComplexMatrix> a_family;
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = k; l < db; ++l) {
      ComplexMatrix f(da);
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) f(i, j) = rho(i * db + k, j * db + l);
      a_family.push_back(std::move(f));
    }
  const ComplexMatrix ua = eig_hermitian(hermitian_combination(a_family)).eigenvectors;

  const ComplexMatrix rotated_a = conjugate_by(rho, kron(ua, ComplexMatrix::identity(db)));
  std::vector<ComplexMatrix> b_family;
  for (std::size_t m = 0; m < da; ++m) {
    const ComplexMatrix blk = b_block(rotated_a, da, db, m, m);
    b_family.push_back(0.5 * (blk + blk.adjoint()));
  }
  const ComplexMatrix ub = eig_hermitian(hermitian_combination(b_family)).eigenvectors;

  const ComplexMatrix diag = conjugate_by(rho, kron(ua, ub));
  SpecialFormResult res;
  res.defect = max_offdiagonal(diag);
  res.ok = res.defect <= tol;
  if (res.ok) {
    ProductBasis basis{ua, ub, {}};
    basis.weights.resize(da * db);
    for (std::size_t k = 0; k < da * db; ++k) basis.weights[k] = diag(k, k).real();
    res.basis = std::move(basis);
  }
  return res;
}

WorkingBasis working_basis(const BipartiteState& state, const ASpectralData& adata, double tol) {
  require_matching(state, adata);
  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  WorkingBasis wb;
  wb.a_basis = adata.spectrum.eigenvectors;
  const ComplexMatrix rotated = conjugate_by(state.matrix(), kron(wb.a_basis, ComplexMatrix::identity(db)));
  for (std::size_t m = 0; m < da; ++m) {
    const ComplexMatrix blk = b_block(rotated, da, db, m, m);
    wb.b_blocks.push_back(0.5 * (blk + blk.adjoint()));
    for (std::size_t mp = 0; mp < da; ++mp)
      if (mp != m) wb.block_offdiagonal = std::max(wb.block_offdiagonal, b_block(rotated, da, db, m, mp).max_abs());
  }

  const ComplexMatrix shared = eig_hermitian(hermitian_combination(wb.b_blocks)).eigenvectors;
  wb.common_b_basis = std::all_of(wb.b_blocks.begin(), wb.b_blocks.end(), [&](const ComplexMatrix& r) {
    return max_offdiagonal(conjugate_by(r, shared)) <= tol;
  });

  for (std::size_t m = 0; m < da; ++m) {
    if (wb.common_b_basis) {
      wb.b_bases.push_back(shared);
      const ComplexMatrix d = conjugate_by(wb.b_blocks[m], shared);
      std::vector<double> w(db);
      for (std::size_t k = 0; k < db; ++k) w[k] = d(k, k).real();
      wb.weights.push_back(std::move(w));
    } else {
      Spectrum s = eig_hermitian(wb.b_blocks[m]);
      wb.b_bases.push_back(std::move(s.eigenvectors));
      wb.weights.push_back(std::move(s.eigenvalues));
    }
  }
  return wb;
}

TCriterionResult check_t_criterion(const ComplexMatrix& t1, const BipartiteState& state,
                                   const ASpectralData& adata, double tol) {
  require_matching(state, adata);
  if (t1.dim() != state.dim()) throw Error(ErrorCode::DimensionMismatch, "t1 does not match the state");
  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  const WorkingBasis wb = working_basis(state, adata, tol);
  const TElementView tv(t1, da, db, wb.a_basis, wb.b_bases);

  TCriterionResult res;
  for (std::size_t m = 0; m < da; ++m) {
    if (adata.in_kernel(m)) continue;
    const auto& w = wb.weights[m];
    double wsum = 0.0;
    for (double x : w) wsum += std::max(x, 0.0);
    for (std::size_t k : adata.kernel) {
      // Everything read in the B basis that diagonalizes R_m.
      auto elem = [&](std::size_t mt, std::size_t mtp) { return tv.element(m, mt, k, mtp, m, m); };
      for (std::size_t mt = 0; mt < db; ++mt)
        for (std::size_t mtp = 0; mtp < db; ++mtp) {
          const double mag = std::abs(elem(mt, mtp));
          res.max_mixing = std::max(res.max_mixing, mag);
          if (mag > tol && !res.mixes_kernel) {
            res.mixes_kernel = true;
            res.witnesses.push_back({"kernel_mixing", {m, mt, k, mtp}, mag});
          }
        }
      // Weighted mean of the B-diagonal elements on the support of R_m.
      cplx mean = 0.0;
      for (std::size_t mt = 0; mt < db; ++mt) mean += std::max(w[mt], 0.0) * elem(mt, mt);
      if (wsum > 0.0) mean /= wsum;
      for (std::size_t mt = 0; mt < db; ++mt) {
        if (w[mt] <= adata.kernel_tol) continue;
        for (std::size_t mtp = 0; mtp < db; ++mtp) {
          const double dev = mtp == mt ? std::abs(elem(mt, mt) - mean) : std::abs(elem(mt, mtp));
          res.max_nontriviality = std::max(res.max_nontriviality, dev);
          if (dev > tol && !res.nontrivial_on_b) {
            res.nontrivial_on_b = true;
            res.witnesses.push_back({mtp == mt ? "b_diagonal_variation" : "b_offdiagonal", {m, mt, k, mtp}, dev});
          }
        }
      }
    }
  }
  return res;
}

Guarantee combine_verdict(bool kernel_nonempty, bool commutation_ok, bool mixes, bool nontrivial) {
  if (!(kernel_nonempty && commutation_ok)) return Guarantee::NoGuarantee;
  return (mixes && nontrivial) ? Guarantee::StrictIncrease : Guarantee::NonNegativeAtLogOrder;
}

GuaranteeVerdict classify(const BipartiteState& state, const ComplexMatrix& t1, const CriteriaConfig& cfg) {
  const ASpectralData adata = a_spectral_data(state, cfg.qstate);
  GuaranteeVerdict v;
  v.kernel_nonempty = !adata.kernel.empty();
  const CommutationResult comm = check_commutation(state, adata, cfg.commutator_tol);
  v.commutation_ok = comm.ok;
  v.commutation_defect = comm.max_defect;
  v.witnesses = comm.witnesses;
  const TCriterionResult tc = check_t_criterion(t1, state, adata, cfg.t_tol);
  v.t_mixes_kernel = tc.mixes_kernel;
  v.t_nontrivial_on_b = tc.nontrivial_on_b;
  v.witnesses.insert(v.witnesses.end(), tc.witnesses.begin(), tc.witnesses.end());
  v.overall = combine_verdict(v.kernel_nonempty, v.commutation_ok, v.t_mixes_kernel, v.t_nontrivial_on_b);
  return v;
}

}  // namespace scatent
