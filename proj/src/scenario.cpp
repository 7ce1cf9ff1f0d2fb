#include "scatent/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "scatent/errors.hpp"
#include "scatent/oracle.hpp"

namespace scatent {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Check: return "check";
    case Mode::Predict: return "predict";
    case Mode::Sweep: return "sweep";
    case Mode::Demon: return "demon";
    case Mode::Probe: return "probe";
  }
  return "sweep";
}

Mode mode_from_string(const std::string& s) {
  static const std::map<std::string, Mode> table{{"check", Mode::Check},
                                                 {"predict", Mode::Predict},
                                                 {"sweep", Mode::Sweep},
                                                 {"demon", Mode::Demon},
                                                 {"probe", Mode::Probe}};
  const auto it = table.find(s);
  if (it == table.end()) throw Error(ErrorCode::ConfigError, "unknown mode '" + s + "'");
  return it->second;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (node && node.Mark().line >= 0) os << ":" << node.Mark().line + 1;
    os << ": field '" << field << "': " << msg;
    throw Error(ErrorCode::ConfigError, os.str());
  }

  YAML::Node required(const YAML::Node& map, const std::string& key, const std::string& path) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, path.empty() ? key : path + "." + key, "missing");
    return n;
  }

  void allow_keys(const YAML::Node& map, const std::string& path, std::set<std::string> keys) const {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, path.empty() ? key : path + "." + key, "unknown key");
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& field) const {
    if (!n.IsScalar()) fail(n, field, "expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(n, field, "cannot convert '" + n.Scalar() + "'");
    }
  }

  double real(const YAML::Node& n, const std::string& field) const {
    const double v = scalar<double>(n, field);
    if (!std::isfinite(v)) fail(n, field, "not finite");
    return v;
  }

  std::size_t index(const YAML::Node& n, const std::string& field) const {
    const long long v = scalar<long long>(n, field);
    if (v < 0) fail(n, field, "negative index");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> reals(const YAML::Node& n, const std::string& field) const {
    if (!n.IsSequence()) fail(n, field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(real(n[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }

  // Either a number or [re, im].
  cplx complex_value(const YAML::Node& n, const std::string& field) const {
    if (n.IsScalar()) return real(n, field);
    if (n.IsSequence() && n.size() == 2) return {real(n[0], field), real(n[1], field)};
    fail(n, field, "expected a number or [re, im]");
  }

  std::vector<MatrixEntry> entries(const YAML::Node& n, const std::string& field, std::size_t dim) const {
    if (!n.IsSequence()) fail(n, field, "expected a list of [row, col, re, im]");
    std::vector<MatrixEntry> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const YAML::Node e = n[i];
      const std::string f = field + "[" + std::to_string(i) + "]";
      if (!e.IsSequence() || (e.size() != 3 && e.size() != 4)) fail(e, f, "expected [row, col, re, im]");
      MatrixEntry me;
      me.row = index(e[0], f);
      me.col = index(e[1], f);
      me.value = {real(e[2], f), e.size() == 4 ? real(e[3], f) : 0.0};
      if (me.row >= dim || me.col >= dim) fail(e, f, "index outside dimension " + std::to_string(dim));
      out.push_back(me);
    }
    return out;
  }

  void check_probabilities(const YAML::Node& n, const std::string& field, const std::vector<double>& p) const {
    double sum = 0.0;
    for (double x : p) {
      if (x < 0.0) fail(n, field, "negative probability " + std::to_string(x));
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(15);
      os << "probabilities sum to " << sum << ", expected 1";
      fail(n, field, os.str());
    }
  }

 private:
  std::string origin_;
};

ComplexMatrix hermitian_from_entries(std::size_t dim, const std::vector<MatrixEntry>& entries) {
  ScenarioTSpec spec{dim, 1, {}};
  for (const auto& e : entries) spec.elements.push_back({e.row, 0, e.col, 0, e.value});
  return structured_t1(spec);
}

StateSpec parse_state(const Parser& p, const YAML::Node& n, std::size_t& da, std::size_t& db) {
  const std::string kind = p.scalar<std::string>(p.required(n, "kind", "state"), "state.kind");
  if (kind == "product") {
    p.allow_keys(n, "state", {"kind", "a_weights", "b_weights"});
    ProductSpec s;
    const YAML::Node an = p.required(n, "a_weights", "state");
    const YAML::Node bn = p.required(n, "b_weights", "state");
    s.a_weights = p.reals(an, "state.a_weights");
    s.b_weights = p.reals(bn, "state.b_weights");
    p.check_probabilities(an, "state.a_weights", s.a_weights);
    p.check_probabilities(bn, "state.b_weights", s.b_weights);
    if (s.a_weights.size() != da) p.fail(an, "state.a_weights", "length differs from dims[0]");
    if (s.b_weights.size() != db) p.fail(bn, "state.b_weights", "length differs from dims[1]");
    return s;
  }
  if (kind == "diagonal") {
    p.allow_keys(n, "state", {"kind", "table"});
    DiagonalSpec s;
    const YAML::Node tn = p.required(n, "table", "state");
    if (!tn.IsSequence() || tn.size() != da) p.fail(tn, "state.table", "expected dims[0] rows");
    std::vector<double> all;
    for (std::size_t i = 0; i < tn.size(); ++i) {
      auto row = p.reals(tn[i], "state.table[" + std::to_string(i) + "]");
      if (row.size() != db) p.fail(tn[i], "state.table[" + std::to_string(i) + "]", "expected dims[1] columns");
      all.insert(all.end(), row.begin(), row.end());
      s.table.push_back(std::move(row));
    }
    p.check_probabilities(tn, "state.table", all);
    return s;
  }
  if (kind == "pure") {
    p.allow_keys(n, "state", {"kind", "amplitudes"});
    PureSpec s;
    const YAML::Node an = p.required(n, "amplitudes", "state");
    if (!an.IsSequence() || an.size() != da * db) p.fail(an, "state.amplitudes", "expected dA*dB amplitudes");
    std::vector<double> probs;
    for (std::size_t i = 0; i < an.size(); ++i) {
      s.amplitudes.push_back(p.complex_value(an[i], "state.amplitudes[" + std::to_string(i) + "]"));
      probs.push_back(std::norm(s.amplitudes.back()));
    }
    p.check_probabilities(an, "state.amplitudes", probs);
    return s;
  }
  if (kind == "thermal") {
    p.allow_keys(n, "state", {"kind", "energies", "beta", "b_index", "b_energies"});
    ThermalSpec s;
    const YAML::Node en = p.required(n, "energies", "state");
    s.energies = p.reals(en, "state.energies");
    if (s.energies.size() != da) p.fail(en, "state.energies", "length differs from dims[0]");
    s.beta = p.real(p.required(n, "beta", "state"), "state.beta");
    s.b_index = p.index(p.required(n, "b_index", "state"), "state.b_index");
    if (s.b_index >= db) p.fail(n["b_index"], "state.b_index", "outside dims[1]");
    if (n["b_energies"]) {
      s.b_energies = p.reals(n["b_energies"], "state.b_energies");
      if (s.b_energies.size() != db) p.fail(n["b_energies"], "state.b_energies", "length differs from dims[1]");
    }
    return s;
  }
  if (kind == "explicit") {
    p.allow_keys(n, "state", {"kind", "entries"});
    ExplicitSpec s;
    s.entries = p.entries(p.required(n, "entries", "state"), "state.entries", da * db);
    return s;
  }
  p.fail(n["kind"], "state.kind", "unknown state kind '" + kind + "'");
}

TSpec parse_t(const Parser& p, const YAML::Node& n, std::size_t da, std::size_t db) {
  const std::string kind = p.scalar<std::string>(p.required(n, "kind", "t"), "t.kind");
  if (kind == "structured") {
    p.allow_keys(n, "t", {"kind", "elements", "h2"});
    StructuredT s;
    const YAML::Node en = p.required(n, "elements", "t");
    if (!en.IsSequence()) p.fail(en, "t.elements", "expected a list");
    for (std::size_t i = 0; i < en.size(); ++i) {
      const YAML::Node e = en[i];
      const std::string f = "t.elements[" + std::to_string(i) + "]";
      if (!e.IsSequence() || (e.size() != 5 && e.size() != 6))
        p.fail(e, f, "expected [a_row, b_row, a_col, b_col, re, im]");
      TElement te{p.index(e[0], f), p.index(e[1], f), p.index(e[2], f), p.index(e[3], f),
                  {p.real(e[4], f), e.size() == 6 ? p.real(e[5], f) : 0.0}};
      if (te.a_row >= da || te.a_col >= da || te.b_row >= db || te.b_col >= db) p.fail(e, f, "index out of range");
      s.elements.push_back(te);
    }
    return s;
  }
  if (kind == "random" || kind == "protected") {
    p.allow_keys(n, "t", {"kind", "seed", "scale", "h2"});
    const auto seed = p.scalar<std::uint64_t>(p.required(n, "seed", "t"), "t.seed");
    const double scale = n["scale"] ? p.real(n["scale"], "t.scale") : 1.0;
    if (kind == "random") return RandomT{seed, scale};
    return ProtectedT{seed, scale};
  }
  if (kind == "kron_a") {
    p.allow_keys(n, "t", {"kind", "entries", "h2"});
    return KronAT{p.entries(p.required(n, "entries", "t"), "t.entries", da)};
  }
  p.fail(n["kind"], "t.kind", "unknown t kind '" + kind + "'");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  const Parser p(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root || !root.IsMap()) throw Error(ErrorCode::ConfigError, origin + ": expected a mapping at top level");
  p.allow_keys(root, "", {"name", "dims", "state", "t", "lambda_grid", "tolerances", "mode", "demon", "probe"});

  ScenarioConfig cfg;
  cfg.name = p.scalar<std::string>(p.required(root, "name", ""), "name");
  const YAML::Node dn = p.required(root, "dims", "");
  if (!dn.IsSequence() || dn.size() != 2) p.fail(dn, "dims", "expected [dA, dB]");
  cfg.dim_a = p.index(dn[0], "dims[0]");
  cfg.dim_b = p.index(dn[1], "dims[1]");
  if (cfg.dim_a < 1 || cfg.dim_b < 1 || cfg.dim_a * cfg.dim_b > 64) p.fail(dn, "dims", "need 1 <= dA*dB <= 64");

  const YAML::Node sn = p.required(root, "state", "");
  if (!sn.IsMap()) p.fail(sn, "state", "expected a mapping");
  cfg.state = parse_state(p, sn, cfg.dim_a, cfg.dim_b);

  const YAML::Node tn = p.required(root, "t", "");
  if (!tn.IsMap()) p.fail(tn, "t", "expected a mapping");
  cfg.t = parse_t(p, tn, cfg.dim_a, cfg.dim_b);
  if (const YAML::Node hn = tn["h2"]) {
    p.allow_keys(hn, "t.h2", {"seed", "scale"});
    cfg.h2_seed = p.scalar<std::uint64_t>(p.required(hn, "seed", "t.h2"), "t.h2.seed");
    if (hn["scale"]) cfg.h2_scale = p.real(hn["scale"], "t.h2.scale");
  }

  if (const YAML::Node gn = root["lambda_grid"]) {
    cfg.lambda_grid = p.reals(gn, "lambda_grid");
    try {
      validate_grid(cfg.lambda_grid);
    } catch (const Error& e) {
      p.fail(gn, "lambda_grid", e.what());
    }
  } else {
    cfg.lambda_grid = default_lambda_grid();
  }

  if (const YAML::Node on = root["tolerances"]) {
    p.allow_keys(on, "tolerances", {"kernel_tol", "degen_tol", "commutator_tol", "t_tol", "agreement", "probe"});
    auto opt = [&](const char* key, double& slot) {
      if (on[key]) {
        slot = p.real(on[key], std::string("tolerances.") + key);
        if (!(slot > 0.0)) p.fail(on[key], std::string("tolerances.") + key, "must be positive");
      }
    };
    opt("kernel_tol", cfg.tol.kernel_tol);
    opt("degen_tol", cfg.tol.degen_tol);
    opt("commutator_tol", cfg.tol.commutator_tol);
    opt("t_tol", cfg.tol.t_tol);
    opt("agreement", cfg.tol.agreement);
    opt("probe", cfg.tol.probe);
  }

  if (const YAML::Node mn = root["mode"]) {
    try {
      cfg.mode = mode_from_string(p.scalar<std::string>(mn, "mode"));
    } catch (const Error& e) {
      p.fail(mn, "mode", e.what());
    }
  }
  auto lambda_field = [&](const YAML::Node& n, const std::string& f) {
    const double l = p.real(n, f);
    if (!(l > 0.0 && l <= 0.5)) p.fail(n, f, "must lie in (0, 0.5]");
    return l;
  };
  if (const YAML::Node n = root["demon"]) {
    p.allow_keys(n, "demon", {"budget", "seed", "lambda"});
    if (n["budget"]) cfg.demon.budget = p.index(n["budget"], "demon.budget");
    if (n["seed"]) cfg.demon.seed = p.scalar<std::uint64_t>(n["seed"], "demon.seed");
    if (n["lambda"]) cfg.demon.lambda = lambda_field(n["lambda"], "demon.lambda");
    if (cfg.demon.budget < 1) p.fail(n, "demon.budget", "must be at least 1");
  }
  if (const YAML::Node n = root["probe"]) {
    p.allow_keys(n, "probe", {"samples", "seed", "lambda"});
    if (n["samples"]) cfg.probe.samples = p.index(n["samples"], "probe.samples");
    if (n["seed"]) cfg.probe.seed = p.scalar<std::uint64_t>(n["seed"], "probe.seed");
    if (n["lambda"]) cfg.probe.lambda = lambda_field(n["lambda"], "probe.lambda");
    if (cfg.probe.samples < 1) p.fail(n, "probe.samples", "must be at least 1");
  }

  // The state and t must actually build.
  std::optional<BipartiteState> st;
  try {
    st.emplace(build_state(cfg));
  } catch (const Error& e) {
    p.fail(sn, "state", e.what());
  }
  try {
    build_pair(cfg, *st);
  } catch (const Error& e) {
    p.fail(tn, "t", e.what());
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

namespace {

void emit_entries(YAML::Emitter& out, const std::vector<MatrixEntry>& entries) {
  out << YAML::BeginSeq;
  for (const auto& e : entries)
    out << YAML::Flow << YAML::BeginSeq << e.row << e.col << e.value.real() << e.value.imag() << YAML::EndSeq;
  out << YAML::EndSeq;
}

void emit_reals(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

std::string dump_scenario(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << cfg.name;
  out << YAML::Key << "dims" << YAML::Value << YAML::Flow << YAML::BeginSeq << cfg.dim_a << cfg.dim_b
      << YAML::EndSeq;
  out << YAML::Key << "mode" << YAML::Value << to_string(cfg.mode);

  out << YAML::Key << "state" << YAML::Value << YAML::BeginMap;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ProductSpec>) {
          out << YAML::Key << "kind" << YAML::Value << "product";
          out << YAML::Key << "a_weights" << YAML::Value;
          emit_reals(out, s.a_weights);
          out << YAML::Key << "b_weights" << YAML::Value;
          emit_reals(out, s.b_weights);
        } else if constexpr (std::is_same_v<S, DiagonalSpec>) {
          out << YAML::Key << "kind" << YAML::Value << "diagonal";
          out << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
          for (const auto& row : s.table) emit_reals(out, row);
          out << YAML::EndSeq;
        } else if constexpr (std::is_same_v<S, PureSpec>) {
          out << YAML::Key << "kind" << YAML::Value << "pure";
          out << YAML::Key << "amplitudes" << YAML::Value << YAML::BeginSeq;
          for (const auto& a : s.amplitudes)
            out << YAML::Flow << YAML::BeginSeq << a.real() << a.imag() << YAML::EndSeq;
          out << YAML::EndSeq;
        } else if constexpr (std::is_same_v<S, ThermalSpec>) {
          out << YAML::Key << "kind" << YAML::Value << "thermal";
          out << YAML::Key << "energies" << YAML::Value;
          emit_reals(out, s.energies);
          out << YAML::Key << "beta" << YAML::Value << s.beta;
          out << YAML::Key << "b_index" << YAML::Value << s.b_index;
          if (!s.b_energies.empty()) {
            out << YAML::Key << "b_energies" << YAML::Value;
            emit_reals(out, s.b_energies);
          }
        } else {
          out << YAML::Key << "kind" << YAML::Value << "explicit";
          out << YAML::Key << "entries" << YAML::Value;
          emit_entries(out, s.entries);
        }
      },
      cfg.state);
  out << YAML::EndMap;

  out << YAML::Key << "t" << YAML::Value << YAML::BeginMap;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, StructuredT>) {
          out << YAML::Key << "kind" << YAML::Value << "structured";
          out << YAML::Key << "elements" << YAML::Value << YAML::BeginSeq;
          for (const auto& e : t.elements)
            out << YAML::Flow << YAML::BeginSeq << e.a_row << e.b_row << e.a_col << e.b_col << e.value.real()
                << e.value.imag() << YAML::EndSeq;
          out << YAML::EndSeq;
        } else if constexpr (std::is_same_v<T, KronAT>) {
          out << YAML::Key << "kind" << YAML::Value << "kron_a";
          out << YAML::Key << "entries" << YAML::Value;
          emit_entries(out, t.entries);
        } else {
          out << YAML::Key << "kind" << YAML::Value << (std::is_same_v<T, RandomT> ? "random" : "protected");
          out << YAML::Key << "seed" << YAML::Value << t.seed;
          out << YAML::Key << "scale" << YAML::Value << t.scale;
        }
      },
      cfg.t);
  if (cfg.h2_seed) {
    out << YAML::Key << "h2" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "seed"
        << YAML::Value << *cfg.h2_seed << YAML::Key << "scale" << YAML::Value << cfg.h2_scale << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "lambda_grid" << YAML::Value;
  emit_reals(out, cfg.lambda_grid);
  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kernel_tol" << YAML::Value << cfg.tol.kernel_tol;
  out << YAML::Key << "degen_tol" << YAML::Value << cfg.tol.degen_tol;
  out << YAML::Key << "commutator_tol" << YAML::Value << cfg.tol.commutator_tol;
  out << YAML::Key << "t_tol" << YAML::Value << cfg.tol.t_tol;
  out << YAML::Key << "agreement" << YAML::Value << cfg.tol.agreement;
  out << YAML::Key << "probe" << YAML::Value << cfg.tol.probe;
  out << YAML::EndMap;
  out << YAML::Key << "demon" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "budget"
      << YAML::Value << cfg.demon.budget << YAML::Key << "seed" << YAML::Value << cfg.demon.seed << YAML::Key
      << "lambda" << YAML::Value << cfg.demon.lambda << YAML::EndMap;
  out << YAML::Key << "probe" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "samples"
      << YAML::Value << cfg.probe.samples << YAML::Key << "seed" << YAML::Value << cfg.probe.seed << YAML::Key
      << "lambda" << YAML::Value << cfg.probe.lambda << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

BipartiteState build_state(const ScenarioConfig& cfg) {
  const std::size_t da = cfg.dim_a;
  const std::size_t db = cfg.dim_b;
  return std::visit(
      [&](const auto& s) -> BipartiteState {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ProductSpec>) {
          return product_state(ComplexMatrix::diagonal(s.a_weights), ComplexMatrix::diagonal(s.b_weights));
        } else if constexpr (std::is_same_v<S, DiagonalSpec>) {
          std::vector<double> w;
          for (const auto& row : s.table) w.insert(w.end(), row.begin(), row.end());
          return diagonal_state(w, da, db);
        } else if constexpr (std::is_same_v<S, PureSpec>) {
          return pure_state(s.amplitudes, da, db);
        } else if constexpr (std::is_same_v<S, ThermalSpec>) {
          return thermal_state(s.energies, s.beta, s.b_index, db);
        } else {
          const ComplexMatrix m = hermitian_from_entries(da * db, s.entries);
          return BipartiteState(DensityMatrix(m), da, db);
        }
      },
      cfg.state);
}

namespace {

ComplexMatrix protect(const ComplexMatrix& h, const BipartiteState& state, const Tolerances& tol) {
  const ASpectralData adata = a_spectral_data(state, tol.kernel_tol, tol.degen_tol);
  const std::size_t da = state.dim_a();
  ComplexMatrix pk(da);
  for (std::size_t k : adata.kernel) {
    const auto v = column(adata.spectrum.eigenvectors, k);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) pk(i, j) += v[i] * std::conj(v[j]);
  }
  const ComplexMatrix id_b = ComplexMatrix::identity(state.dim_b());
  const ComplexMatrix p = kron(pk, id_b);
  const ComplexMatrix q = kron(ComplexMatrix::identity(da) - pk, id_b);
  ComplexMatrix out = p * h * p + q * h * q;
  return 0.5 * (out + out.adjoint());
}

}  // namespace

ComplexMatrix build_t1(const ScenarioConfig& cfg, const BipartiteState& state) {
  const std::size_t d = cfg.dim_a * cfg.dim_b;
  return std::visit(
      [&](const auto& t) -> ComplexMatrix {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, StructuredT>) {
          return structured_t1(ScenarioTSpec{cfg.dim_a, cfg.dim_b, t.elements});
        } else if constexpr (std::is_same_v<T, RandomT>) {
          return t.scale * random_hermitian(d, t.seed);
        } else if constexpr (std::is_same_v<T, KronAT>) {
          return kron(hermitian_from_entries(cfg.dim_a, t.entries), ComplexMatrix::identity(cfg.dim_b));
        } else {
          return protect(t.scale * random_hermitian(d, t.seed), state, cfg.tol);
        }
      },
      cfg.t);
}

TMatrixPair build_pair(const ScenarioConfig& cfg, const BipartiteState& state) {
  const ComplexMatrix t1 = build_t1(cfg, state);
  const ComplexMatrix h2 = cfg.h2_seed ? cfg.h2_scale * random_hermitian(t1.dim(), *cfg.h2_seed)
                                       : ComplexMatrix::zeros(t1.dim());
  return complete_second_order(t1, h2, cfg.dim_a, cfg.dim_b);
}

PerturbConfig perturb_config(const Tolerances& tol) {
  PerturbConfig pc;
  pc.criteria.commutator_tol = tol.commutator_tol;
  pc.criteria.t_tol = tol.t_tol;
  pc.criteria.qstate.kernel_tol = tol.kernel_tol;
  pc.criteria.qstate.degen_tol = tol.degen_tol;
  return pc;
}

ComplexMatrix sample_t1(const ScenarioConfig& cfg, const BipartiteState& state, std::uint64_t seed) {
  const ComplexMatrix h = random_hermitian(cfg.dim_a * cfg.dim_b, seed);
  if (std::holds_alternative<ProtectedT>(cfg.t)) return protect(h, state, cfg.tol);
  return h;
}

}  // namespace scatent
