#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scatent/linalg.hpp"
#include "scatent/perturb.hpp"
#include "scatent/qstate.hpp"
#include "scatent/smatrix.hpp"

namespace scatent {

enum class Mode { Check, Predict, Sweep, Demon, Probe };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// [row, col, re, im]
struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  cplx value;
};

struct ProductSpec {
  std::vector<double> a_weights;
  std::vector<double> b_weights;
};
struct DiagonalSpec {
  std::vector<std::vector<double>> table;  // dA rows, dB columns
};
struct PureSpec {
  std::vector<cplx> amplitudes;  // normalized on construction
};
struct ThermalSpec {
  std::vector<double> energies;
  double beta = 1.0;
  std::size_t b_index = 0;
  std::vector<double> b_energies;  // optional; enables the energy-conserving formula
};
struct ExplicitSpec {
  std::vector<MatrixEntry> entries;  // Hermitian mirrors filled in when absent
};
using StateSpec = std::variant<ProductSpec, DiagonalSpec, PureSpec, ThermalSpec, ExplicitSpec>;

struct StructuredT {
  std::vector<TElement> elements;
};
struct RandomT {
  std::uint64_t seed = 0;
  double scale = 1.0;
};
struct KronAT {
  std::vector<MatrixEntry> entries;  // H_A, Hermitian closure applied
};
/// Random t1 that never connects the kernel of rho_A with its support.
struct ProtectedT {
  std::uint64_t seed = 0;
  double scale = 1.0;
};
using TSpec = std::variant<StructuredT, RandomT, KronAT, ProtectedT>;

struct Tolerances {
  double kernel_tol = 1e-12;
  double degen_tol = 1e-9;
  double commutator_tol = 1e-10;
  double t_tol = 1e-10;
  double agreement = 0.02;
  double probe = 1e-10;
};

struct DemonSettings {
  std::size_t budget = 500;
  std::uint64_t seed = 1;
  double lambda = 1e-3;
};

struct ProbeSettings {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double lambda = 1e-3;
};

struct ScenarioConfig {
  std::string name;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  StateSpec state;
  TSpec t;
  std::optional<std::uint64_t> h2_seed;  // independent Hermitian part of T2
  double h2_scale = 1.0;
  std::vector<double> lambda_grid;
  Tolerances tol;
  Mode mode = Mode::Sweep;
  DemonSettings demon;
  ProbeSettings probe;
};

/// Parse a YAML scenario. Throws ConfigError naming the field and line.
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");
ScenarioConfig load_scenario(const std::string& path);

/// Emit the scenario back as YAML (round-trips through parse_scenario).
std::string dump_scenario(const ScenarioConfig& cfg);

BipartiteState build_state(const ScenarioConfig& cfg);
ComplexMatrix build_t1(const ScenarioConfig& cfg, const BipartiteState& state);
TMatrixPair build_pair(const ScenarioConfig& cfg, const BipartiteState& state);
PerturbConfig perturb_config(const Tolerances& tol);

/// Random draw from the scenario's t family: the protected family stays
/// protected, every other kind samples the Gaussian ensemble.
ComplexMatrix sample_t1(const ScenarioConfig& cfg, const BipartiteState& state, std::uint64_t seed);

}  // namespace scatent
