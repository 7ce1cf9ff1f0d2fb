#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scatent/linalg.hpp"
#include "scatent/qstate.hpp"

namespace scatent {

struct CriteriaConfig {
  double commutator_tol = 1e-10;
  double t_tol = 1e-10;
  double special_form_tol = 1e-10;
  QStateConfig qstate;
};

enum class Guarantee { StrictIncrease, NonNegativeAtLogOrder, NoGuarantee };
std::string to_string(Guarantee g);

struct Witness {
  std::string kind;
  std::vector<std::size_t> indices;
  double defect = 0.0;
};

struct CommutationResult {
  bool ok = false;
  double max_defect = 0.0;
  std::vector<Witness> witnesses;
};

/// ||[|m><m'| (x) 1_B, rho]||_max for every pair inside a degeneracy class of rho_A.
CommutationResult check_commutation(const BipartiteState& state, const ASpectralData& adata,
                                    double tol = 1e-10);

/// A product basis diagonalizing rho: columns of a_basis (x) columns of b_basis.
struct ProductBasis {
  ComplexMatrix a_basis;
  ComplexMatrix b_basis;
  std::vector<double> weights;  // rho_{m, mt} at index m*dB + mt
};

struct SpecialFormResult {
  bool ok = false;
  double defect = 0.0;  // largest off-diagonal magnitude in the constructed product basis
  std::optional<ProductBasis> basis;
};

/// Decides whether some product basis makes rho diagonal. The A basis comes
/// from simultaneously diagonalizing the commuting family <.,k|rho|.,l>, the
/// B basis from the resulting diagonal blocks; the final diagonality check
/// is the verdict.
SpecialFormResult check_special_form(const BipartiteState& state, double tol = 1e-10);

/// A eigenbasis of rho_A plus, for each A eigen-index m, an eigenbasis of the
/// B block R_m = <m|rho|m> with its eigenvalues. When all R_m commute one
/// basis is shared (`common_b_basis`).
struct WorkingBasis {
  ComplexMatrix a_basis;
  std::vector<ComplexMatrix> b_bases;
  std::vector<std::vector<double>> weights;  // weights[m][mt]
  std::vector<ComplexMatrix> b_blocks;       // R_m in the computational B basis
  bool common_b_basis = false;
  double block_offdiagonal = 0.0;  // largest |<m|rho|m'>| block entry, m != m'
};

WorkingBasis working_basis(const BipartiteState& state, const ASpectralData& adata, double tol = 1e-10);

struct TCriterionResult {
  bool mixes_kernel = false;
  bool nontrivial_on_b = false;
  double max_mixing = 0.0;
  double max_nontriviality = 0.0;
  std::vector<Witness> witnesses;
};

/// Kernel-mixing and B-nontriviality of t1 in the working basis. B
/// nontriviality is judged on rows (m, mt) with rho_{m,mt} > kernel_tol.
TCriterionResult check_t_criterion(const ComplexMatrix& t1, const BipartiteState& state,
                                   const ASpectralData& adata, double tol = 1e-10);

struct GuaranteeVerdict {
  bool kernel_nonempty = false;
  bool commutation_ok = false;
  bool t_mixes_kernel = false;
  bool t_nontrivial_on_b = false;
  Guarantee overall = Guarantee::NoGuarantee;
  double commutation_defect = 0.0;
  std::vector<Witness> witnesses;
};

Guarantee combine_verdict(bool kernel_nonempty, bool commutation_ok, bool mixes, bool nontrivial);

GuaranteeVerdict classify(const BipartiteState& state, const ComplexMatrix& t1, const CriteriaConfig& cfg = {});

}  // namespace scatent
