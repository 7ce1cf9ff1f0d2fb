#include "scatent/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scatent/errors.hpp"

namespace scatent {

std::string to_string(Branch b) {
  switch (b) {
    case Branch::KernelBranch: return "KernelBranch";
    case Branch::FullRankBranch: return "FullRankBranch";
    case Branch::Mixed: return "Mixed";
  }
  return "Mixed";
}

namespace {

const cplx kI(0.0, 1.0);

void require_t(const BipartiteState& state, const ComplexMatrix& t1) {
  if (t1.dim() != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "t1 dimension " + std::to_string(t1.dim()) +
                                                  " does not match the state dimension " +
                                                  std::to_string(state.dim()));
  }
}

void require_adata(const BipartiteState& state, const ASpectralData& adata) {
  if (adata.dim() != state.dim_a()) throw Error(ErrorCode::BasisMismatch, "spectral data does not match dA");
}

// U^dagger tr_B(X) U.
ComplexMatrix reduce_rotated(const ComplexMatrix& x, const BipartiteState& state, const ASpectralData& adata) {
  return conjugate_by(partial_trace_b(x, state.dim_a(), state.dim_b()), adata.spectrum.eigenvectors);
}

ComplexMatrix first_order_full(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata) {
  return reduce_rotated(kI * commutator(t1, state.matrix()), state, adata);
}

ComplexMatrix second_order_full(const BipartiteState& state, const TMatrixPair& pair, const ASpectralData& adata) {
  const ComplexMatrix& rho = state.matrix();
  const ComplexMatrix inner = commutator(pair.t1, rho);
  ComplexMatrix x = kI * commutator(pair.t2_hermitian_part(), rho) - 0.5 * commutator(pair.t1, inner);
  return reduce_rotated(x, state, adata);
}

ComplexMatrix restrict(const ComplexMatrix& m, std::span<const std::size_t> idx) {
  ComplexMatrix out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

double class_mean(const ASpectralData& adata, const std::vector<std::size_t>& cls) {
  double s = 0.0;
  for (std::size_t m : cls) s += adata.eigenvalue(m);
  return s / static_cast<double>(cls.size());
}

void require_commutation(const BipartiteState& state, const ASpectralData& adata, const PerturbConfig& cfg,
                         const char* what) {
  const CommutationResult comm = check_commutation(state, adata, cfg.criteria.commutator_tol);
  if (!comm.ok) {
    throw Error(ErrorCode::PreconditionViolated,
                std::string(what) + " requires the commutation criterion (max defect " +
                    std::to_string(comm.max_defect) + ")");
  }
}

cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, i);
  return s;
}

// Pairwise summand of the full-rank formulas for one ordered pair (m, n):
//   first  = sum (rho_{m,mt} - rho_{n,mt'}) |T_{m n, mt mt'}|^2
//   second = |sum_mt (rho_{m,mt} - rho_{n,mt}) T_{m n, mt mt}|^2 / (p_m - p_n)
// With log_weighted the element form |T - delta Y|^2 is used; it equals first - second.
struct PairSummand {
  double first = 0.0;
  double second = 0.0;   // zero when p_m == p_n (excluded)
  double combined = 0.0; // element form of first - second (or first alone when excluded)
};

class PairEvaluator {
 public:
  PairEvaluator(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata, double tol)
      : state_(state), adata_(adata), wb_(working_basis(state, adata, tol)),
        view_(t1, state.dim_a(), state.dim_b(), wb_.a_basis, wb_.b_bases) {
    if (!wb_.common_b_basis) {
      const std::size_t da = state.dim_a();
      const ComplexMatrix rotated =
          conjugate_by(t1, kron(wb_.a_basis, ComplexMatrix::identity(state.dim_b())));
      for (std::size_t m = 0; m < da; ++m)
        for (std::size_t n = 0; n < da; ++n) t_blocks_.push_back(b_block(rotated, da, state.dim_b(), m, n));
    }
  }

  bool element_form() const { return wb_.common_b_basis; }

  PairSummand evaluate(std::size_t m, std::size_t n, bool excluded) const {
    return wb_.common_b_basis ? element(m, n, excluded) : traced(m, n, excluded);
  }

 private:
  PairSummand element(std::size_t m, std::size_t n, bool excluded) const {
    const std::size_t db = state_.dim_b();
    const auto& wm = wb_.weights[m];
    const auto& wn = wb_.weights[n];
    const double dp = adata_.eigenvalue(m) - adata_.eigenvalue(n);
    PairSummand s;
    cplx y_num = 0.0;
    for (std::size_t k = 0; k < db; ++k) y_num += (wm[k] - wn[k]) * view_(m, k, n, k);
    const cplx y = excluded ? cplx{} : y_num / dp;
    for (std::size_t k = 0; k < db; ++k)
      for (std::size_t l = 0; l < db; ++l) {
        const cplx t = view_(m, k, n, l);
        const double dw = wm[k] - wn[l];
        s.first += dw * std::norm(t);
        s.combined += dw * std::norm(k == l ? t - y : t);
      }
    if (!excluded) s.second = std::norm(y_num) / dp;
    return s;
  }

  PairSummand traced(std::size_t m, std::size_t n, bool excluded) const {
    const std::size_t da = state_.dim_a();
    const ComplexMatrix& t = t_blocks_[m * da + n];
    const ComplexMatrix td = t.adjoint();
    const ComplexMatrix& rm = wb_.b_blocks[m];
    const ComplexMatrix& rn = wb_.b_blocks[n];
    PairSummand s;
    s.first = (trace_product(rm, t * td) - trace_product(rn, td * t)).real();
    if (!excluded) {
      const double dp = adata_.eigenvalue(m) - adata_.eigenvalue(n);
      s.second = std::norm(trace_product(rm - rn, t)) / dp;
    }
    s.combined = s.first - s.second;
    return s;
  }

  const BipartiteState& state_;
  const ASpectralData& adata_;
  WorkingBasis wb_;
  TElementView view_;
  std::vector<ComplexMatrix> t_blocks_;
};

// (1/2) sum over ordered pairs of non-kernel indices in different classes of
// ln(p_m/p_n) * summand.
FullRankSecondOrder log_weighted_pair_sum(const BipartiteState& state, const ComplexMatrix& t1,
                                          const ASpectralData& adata, double tol) {
  const PairEvaluator eval(state, t1, adata, tol);
  FullRankSecondOrder out;
  out.element_form = eval.element_form();
  const std::size_t da = state.dim_a();
  double sum = 0.0;
  for (std::size_t m = 0; m < da; ++m) {
    if (adata.in_kernel(m)) continue;
    for (std::size_t n = 0; n < da; ++n) {
      if (adata.in_kernel(n) || m == n) continue;
      if (adata.class_of[m] == adata.class_of[n]) {
        ++out.excluded_pairs;
        continue;
      }
      const double lr = std::log(adata.eigenvalue(m) / adata.eigenvalue(n));
      sum += lr * eval.evaluate(m, n, false).combined;
    }
  }
  out.value = 0.5 * sum;
  return out;
}

}  // namespace

std::vector<double> PerturbationBlock::shifts(double lambda) const {
  ComplexMatrix m = lambda * first_order + (lambda * lambda) * second_order;
  return eig_hermitian(m).eigenvalues;
}

ComplexMatrix delta_rho_a_first(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                                std::span<const std::size_t> class_indices) {
  require_adata(state, adata);
  require_t(state, t1);
  for (std::size_t m : class_indices)
    if (m >= adata.dim()) throw Error(ErrorCode::BasisMismatch, "class index out of range");
  return restrict(first_order_full(state, t1, adata), class_indices);
}

PerturbationMatrix perturbation_matrix(const BipartiteState& state, const TMatrixPair& pair,
                                       const ASpectralData& adata) {
  require_adata(state, adata);
  require_t(state, pair.t1);
  require_t(state, pair.t2);
  const ComplexMatrix d1 = first_order_full(state, pair.t1, adata);
  const ComplexMatrix d2 = second_order_full(state, pair, adata);

  std::vector<double> reps;
  for (const auto& cls : adata.degeneracy_classes) reps.push_back(class_mean(adata, cls));

  PerturbationMatrix pm;
  for (std::size_t c = 0; c < adata.degeneracy_classes.size(); ++c) {
    const auto& cls = adata.degeneracy_classes[c];
    PerturbationBlock blk;
    blk.indices = cls;
    blk.eigenvalue = reps[c];
    blk.kernel = adata.in_kernel(cls.front());
    blk.first_order = restrict(d1, cls);
    blk.second_order = restrict(d2, cls);
    for (std::size_t n = 0; n < adata.dim(); ++n) {
      const std::size_t cn = adata.class_of[n];
      if (cn == c) continue;
      const double gap = reps[c] - reps[cn];
      if (std::abs(gap) <= adata.degen_tol) {
        throw Error(ErrorCode::DegeneracyLeak, "denominator " + std::to_string(gap) +
                                                   " between classes " + std::to_string(c) + " and " +
                                                   std::to_string(cn));
      }
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = 0; j < cls.size(); ++j)
          blk.second_order(i, j) += d1(cls[i], n) * d1(n, cls[j]) / gap;
    }
    // Hermitian in exact arithmetic; a nearly empty block can miss the relative check otherwise.
    blk.first_order = 0.5 * (blk.first_order + blk.first_order.adjoint());
    blk.second_order = 0.5 * (blk.second_order + blk.second_order.adjoint());
    pm.blocks.push_back(std::move(blk));
  }
  return pm;
}

double first_order_entropy(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                           double near_kernel_limit) {
  require_adata(state, adata);
  require_t(state, t1);
  if (adata.has_near_kernel(near_kernel_limit)) {
    throw Error(ErrorCode::IllConditionedSpectrum,
                "rho_A has an eigenvalue between the kernel tolerance and " + std::to_string(near_kernel_limit));
  }
  const ComplexMatrix d1 = first_order_full(state, t1, adata);
  double s = 0.0;
  for (const auto& cls : adata.degeneracy_classes) {
    if (adata.in_kernel(cls.front())) continue;
    // The eigenvalues of the class block sum to its trace; ln p is constant on the class.
    double tr = 0.0;
    for (std::size_t m : cls) tr += d1(m, m).real();
    s -= tr * (std::log(class_mean(adata, cls)) + 1.0);
  }
  return s;
}

double first_order_entropy(const BipartiteState& state, const ComplexMatrix& t1, const PerturbConfig& cfg) {
  return first_order_entropy(state, t1, a_spectral_data(state, cfg.criteria.qstate),
                             cfg.criteria.qstate.near_kernel_limit);
}

LogCoefficient log_coefficient_detail(const BipartiteState& state, const ComplexMatrix& t1,
                                      const ASpectralData& adata, const PerturbConfig& cfg) {
  require_adata(state, adata);
  require_t(state, t1);
  if (adata.kernel.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "log coefficient requires a nonempty kernel of rho_A");
  }
  require_commutation(state, adata, cfg, "log coefficient");

  const std::size_t da = state.dim_a();
  const std::size_t db = state.dim_b();
  const WorkingBasis wb = working_basis(state, adata, cfg.criteria.special_form_tol);
  const TElementView tv(t1, da, db, wb.a_basis, wb.b_bases);

  LogCoefficient out;
  for (std::size_t m = 0; m < da; ++m) {
    if (adata.in_kernel(m)) continue;
    const auto& w = wb.weights[m];
    const double pm = adata.eigenvalue(m);
    const double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t k : adata.kernel) {
      // Both B indices read in the eigenbasis of R_m.
      auto t = [&](std::size_t mt, std::size_t mtp) { return tv.element(m, mt, k, mtp, m, m); };
      cplx x = 0.0;
      for (std::size_t n = 0; n < db; ++n) x += w[n] * t(n, n);
      x /= pm;
      for (std::size_t mt = 0; mt < db; ++mt)
        for (std::size_t mtp = 0; mtp < db; ++mtp) {
          const cplx e = t(mt, mtp);
          out.value += w[mt] * std::norm(mt == mtp ? e - x : e);
          out.expanded_form += w[mt] * std::norm(e);
        }
      cplx diag_sum = 0.0;
      for (std::size_t mt = 0; mt < db; ++mt) diag_sum += w[mt] * t(mt, mt);
      out.expanded_form -= std::norm(diag_sum) / wsum;
    }
  }
  out.form_defect = std::abs(out.value - out.expanded_form);

  const TMatrixPair pair = complete_second_order(t1, ComplexMatrix::zeros(t1.dim()), da, db);
  const PerturbationMatrix pmat = perturbation_matrix(state, pair, adata);
  for (const auto& blk : pmat.blocks)
    if (blk.kernel) out.kernel_shifts = eig_hermitian(blk.second_order).eigenvalues;
  return out;
}

double log_coefficient(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                       const PerturbConfig& cfg) {
  return log_coefficient_detail(state, t1, adata, cfg).value;
}

FullRankSecondOrder full_rank_second_order_detail(const BipartiteState& state, const ComplexMatrix& t1,
                                                  const ASpectralData& adata, const PerturbConfig& cfg) {
  require_adata(state, adata);
  require_t(state, t1);
  if (!adata.kernel.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "full-rank formula requires rho_A without a kernel");
  }
  require_commutation(state, adata, cfg, "full-rank second order");
  return log_weighted_pair_sum(state, t1, adata, cfg.criteria.special_form_tol);
}

double full_rank_second_order(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                              const PerturbConfig& cfg) {
  return full_rank_second_order_detail(state, t1, adata, cfg).value;
}

double trace_identity_check(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                            const PerturbConfig& cfg) {
  require_adata(state, adata);
  require_t(state, t1);
  const PairEvaluator eval(state, t1, adata, cfg.criteria.special_form_tol);
  const std::size_t da = state.dim_a();
  double sum = 0.0;
  for (std::size_t m = 0; m < da; ++m)
    for (std::size_t n = 0; n < da; ++n) {
      const bool excluded = adata.class_of[m] == adata.class_of[n];
      const PairSummand s = eval.evaluate(m, n, excluded);
      sum += s.first - s.second;
    }
  return std::abs(sum);
}

double general_second_order(const PerturbationMatrix& pm) {
  double c = 0.0;
  for (const auto& blk : pm.blocks) {
    if (blk.kernel) continue;
    const double p = blk.eigenvalue;
    c -= (std::log(p) + 1.0) * blk.second_order.trace().real();
    c -= (blk.first_order * blk.first_order).trace().real() / (2.0 * p);
  }
  return c;
}

BipartiteState thermal_state(std::span<const double> energies_a, double beta, std::size_t b_index,
                             std::size_t dim_b) {
  if (energies_a.empty() || b_index >= dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "thermal state needs A energies and a B index below dB");
  }
  const double e0 = *std::min_element(energies_a.begin(), energies_a.end());
  std::vector<double> p(energies_a.size());
  double z = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) z += (p[m] = std::exp(-beta * (energies_a[m] - e0)));
  for (double& x : p) x /= z;
  ComplexMatrix rb(dim_b);
  rb(b_index, b_index) = 1.0;
  return product_state(ComplexMatrix::diagonal(p), rb);
}

double thermal_delta_s(std::span<const double> energies_a, double beta, std::size_t b_index,
                       const ComplexMatrix& t1, std::span<const double> energies_b, double tol) {
  const std::size_t da = energies_a.size();
  const std::size_t db = energies_b.size();
  if (t1.dim() != da * db || b_index >= db) {
    throw Error(ErrorCode::DimensionMismatch, "thermal inputs do not match t1");
  }
  for (std::size_t r = 0; r < t1.dim(); ++r)
    for (std::size_t c = 0; c < t1.dim(); ++c) {
      if (std::abs(t1(r, c)) <= tol) continue;
      const double e_in = energies_a[r / db] + energies_b[r % db];
      const double e_out = energies_a[c / db] + energies_b[c % db];
      if (std::abs(e_in - e_out) > tol) {
        throw Error(ErrorCode::EnergyViolation, "t1 couples states " + std::to_string(r) + " and " +
                                                    std::to_string(c) + " of energies " +
                                                    std::to_string(e_in) + " and " + std::to_string(e_out));
      }
    }
  const double e0 = *std::min_element(energies_a.begin(), energies_a.end());
  std::vector<double> p(da);
  double z = 0.0;
  for (std::size_t m = 0; m < da; ++m) z += (p[m] = std::exp(-beta * (energies_a[m] - e0)));
  double s = 0.0;
  for (std::size_t m = 0; m < da; ++m) {
    const std::size_t row = m * db + b_index;
    double inner = 0.0;
    for (std::size_t mp = 0; mp < da; ++mp)
      for (std::size_t mtp = 0; mtp < db; ++mtp)
        inner += beta * (energies_b[mtp] - energies_b[b_index]) * std::norm(t1(row, mp * db + mtp));
    s -= p[m] / z * inner;
  }
  return s;
}

PerturbativePrediction predict(const BipartiteState& state, const TMatrixPair& pair, const PerturbConfig& cfg) {
  require_t(state, pair.t1);
  const ComplexMatrix& t1 = pair.t1;
  const auto& qcfg = cfg.criteria.qstate;
  const ASpectralData adata = a_spectral_data(state, qcfg);
  PerturbativePrediction pred;
  pred.commutation_ok = check_commutation(state, adata, cfg.criteria.commutator_tol).ok;
  pred.near_kernel = adata.has_near_kernel(qcfg.near_kernel_limit);

  std::size_t nonkernel_classes = 0;
  for (const auto& cls : adata.degeneracy_classes)
    if (!adata.in_kernel(cls.front())) ++nonkernel_classes;
  if (pred.near_kernel) {
    pred.branch = Branch::Mixed;
    pred.notes.push_back("rho_A has eigenvalues in (kernel_tol, near_kernel_limit); both regimes reported");
  } else if (adata.kernel.empty()) {
    pred.branch = Branch::FullRankBranch;
  } else {
    pred.branch = nonkernel_classes == 1 ? Branch::KernelBranch : Branch::Mixed;
  }

  std::optional<PerturbationMatrix> pm;
  try {
    pm = perturbation_matrix(state, pair, adata);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegeneracyLeak) throw;
    pred.notes.push_back(e.what());
  }
  if (pm) {
    for (std::size_t c = 0; c < pm->blocks.size(); ++c) {
      const auto& blk = pm->blocks[c];
      pred.shifts.push_back({c, blk.eigenvalue, blk.kernel, eig_hermitian(blk.first_order).eigenvalues,
                             eig_hermitian(blk.second_order).eigenvalues});
    }
  }

  if (!pred.near_kernel) pred.order1_coeff = first_order_entropy(state, t1, adata, qcfg.near_kernel_limit);

  if (!adata.kernel.empty()) {
    if (pred.commutation_ok) {
      const LogCoefficient lc = log_coefficient_detail(state, t1, adata, cfg);
      pred.log_coeff = lc.value;
      pred.log_coeff_expanded = lc.expanded_form;
    } else if (pm) {
      for (const auto& blk : pm->blocks)
        if (blk.kernel) pred.log_coeff = blk.second_order.trace().real();
      pred.notes.push_back("commutation criterion fails: log coefficient is the kernel-shift trace");
    }
  }

  if (pred.branch == Branch::FullRankBranch) {
    if (pm) pred.order2_general = general_second_order(*pm);
    if (pred.commutation_ok) {
      const FullRankSecondOrder fr = full_rank_second_order_detail(state, t1, adata, cfg);
      pred.order2_coeff = fr.value;
      pred.excluded_pairs = fr.excluded_pairs;
    } else {
      pred.order2_coeff = pred.order2_general;
      pred.notes.push_back("commutation criterion fails: lambda^2 coefficient from the M blocks");
    }
  } else if (pred.branch == Branch::Mixed && pred.commutation_ok && !pred.near_kernel) {
    const FullRankSecondOrder fr = log_weighted_pair_sum(state, t1, adata, cfg.criteria.special_form_tol);
    pred.nonkernel_pair_coeff = fr.value;
    pred.excluded_pairs = fr.excluded_pairs;
  }

  if (pred.near_kernel) {
    const ASpectralData widened =
        spectral_data_from(adata.spectrum, qcfg.near_kernel_limit, adata.degen_tol);
    if (check_commutation(state, widened, cfg.criteria.commutator_tol).ok && !widened.kernel.empty()) {
      pred.near_kernel_log_coeff = log_coefficient(state, t1, widened, cfg);
    }
    if (adata.kernel.empty() && pred.commutation_ok) {
      const FullRankSecondOrder fr = log_weighted_pair_sum(state, t1, adata, cfg.criteria.special_form_tol);
      pred.order2_coeff = fr.value;
      pred.excluded_pairs = fr.excluded_pairs;
    }
  }
  return pred;
}

PerturbativePrediction predict(const BipartiteState& state, const ComplexMatrix& t1, const PerturbConfig& cfg) {
  return predict(state, complete_second_order(t1, ComplexMatrix::zeros(t1.dim()), state.dim_a(), state.dim_b()),
                 cfg);
}

}  // namespace scatent
