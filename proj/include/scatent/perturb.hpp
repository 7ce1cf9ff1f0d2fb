#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scatent/criteria.hpp"
#include "scatent/linalg.hpp"
#include "scatent/qstate.hpp"
#include "scatent/smatrix.hpp"

namespace scatent {

struct PerturbConfig {
  CriteriaConfig criteria;
  double form_agreement_tol = 1e-10;
  double energy_tol = 1e-9;
};

/// delta rho^{A(1)} restricted to one degeneracy class, in the eigenbasis of rho_A.
ComplexMatrix delta_rho_a_first(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                                std::span<const std::size_t> class_indices);

/// Restriction of the eigenvalue-shift matrix M to one degeneracy class:
/// M = lambda * first_order + lambda^2 * second_order + O(lambda^3).
struct PerturbationBlock {
  std::vector<std::size_t> indices;
  double eigenvalue = 0.0;  // class representative
  bool kernel = false;
  ComplexMatrix first_order;
  ComplexMatrix second_order;

  /// Eigenvalues of lambda*first_order + lambda^2*second_order, ascending.
  std::vector<double> shifts(double lambda) const;
};

struct PerturbationMatrix {
  std::vector<PerturbationBlock> blocks;
};

PerturbationMatrix perturbation_matrix(const BipartiteState& state, const TMatrixPair& pair,
                                       const ASpectralData& adata);

/// Coefficient of lambda in delta S.
double first_order_entropy(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                           double near_kernel_limit = 1e-6);
double first_order_entropy(const BipartiteState& state, const ComplexMatrix& t1, const PerturbConfig& cfg = {});

struct LogCoefficient {
  double value = 0.0;          // sum of |T - delta X|^2 weighted form
  double expanded_form = 0.0;  // |T|^2 minus overcounting-correction form
  double form_defect = 0.0;
  std::vector<double> kernel_shifts;  // eigenvalues of the second-order kernel block
};

/// Coefficient of lambda^2 ln(1/lambda^2); requires a nonempty kernel and the commutation criterion.
LogCoefficient log_coefficient_detail(const BipartiteState& state, const ComplexMatrix& t1,
                                      const ASpectralData& adata, const PerturbConfig& cfg = {});
double log_coefficient(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                       const PerturbConfig& cfg = {});

struct FullRankSecondOrder {
  double value = 0.0;
  std::size_t excluded_pairs = 0;  // ordered (m, m') pairs dropped for equal eigenvalues
  bool element_form = false;       // false: evaluated with B-traces (no shared B eigenbasis)
};

/// Coefficient of lambda^2 when rho_A has full rank and the commutation criterion holds.
FullRankSecondOrder full_rank_second_order_detail(const BipartiteState& state, const ComplexMatrix& t1,
                                                  const ASpectralData& adata, const PerturbConfig& cfg = {});
double full_rank_second_order(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                              const PerturbConfig& cfg = {});

/// |sum_m delta rho^{A(2)}_m| from the pairwise-summand form; vanishes by antisymmetry.
double trace_identity_check(const BipartiteState& state, const ComplexMatrix& t1, const ASpectralData& adata,
                            const PerturbConfig& cfg = {});

/// Generic lambda^2 coefficient from the M blocks:
/// sum_c [ -(ln p_c + 1) tr M2_c - tr(M1_c^2) / (2 p_c) ], over non-kernel classes.
double general_second_order(const PerturbationMatrix& pm);

/// rho_in = thermal(E_A, beta) (x) |b><b|.
BipartiteState thermal_state(std::span<const double> energies_a, double beta, std::size_t b_index,
                             std::size_t dim_b);

/// Energy-conserving thermal formula, coefficient of lambda^2. Works in the
/// computational (energy) basis; throws EnergyViolation when t1 couples states
/// of different total energy.
double thermal_delta_s(std::span<const double> energies_a, double beta, std::size_t b_index,
                       const ComplexMatrix& t1, std::span<const double> energies_b, double tol = 1e-9);

enum class Branch { KernelBranch, FullRankBranch, Mixed };
std::string to_string(Branch b);

struct ShiftEntry {
  std::size_t class_index = 0;
  double eigenvalue = 0.0;
  bool kernel = false;
  std::vector<double> first_order;   // eigenvalues of the first-order class block
  std::vector<double> second_order;  // eigenvalues of the second-order class block
};

struct PerturbativePrediction {
  Branch branch = Branch::Mixed;
  bool commutation_ok = false;
  bool near_kernel = false;
  std::optional<double> order1_coeff;  // absent when the spectrum is ill-conditioned
  double log_coeff = 0.0;
  std::optional<double> log_coeff_expanded;
  std::optional<double> order2_coeff;    // only on the full-rank branch
  std::optional<double> order2_general;  // M-block evaluation, full-rank branch
  std::optional<double> nonkernel_pair_coeff;  // mixed branch: pair sum over non-kernel classes
  std::optional<double> near_kernel_log_coeff;  // near-kernel eigenvalues treated as kernel
  std::size_t excluded_pairs = 0;
  std::vector<ShiftEntry> shifts;
  std::vector<std::string> notes;
};

PerturbativePrediction predict(const BipartiteState& state, const TMatrixPair& pair, const PerturbConfig& cfg = {});
PerturbativePrediction predict(const BipartiteState& state, const ComplexMatrix& t1, const PerturbConfig& cfg = {});

}  // namespace scatent
