#include "scatent/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "scatent/errors.hpp"
#include "scatent/parallel.hpp"

namespace scatent {

double relative_error(double predicted, double fitted) {
  return std::abs(predicted - fitted) / std::max(std::abs(fitted), 1e-12);
}

bool Report::agreements_ok() const {
  return std::all_of(agreements.begin(), agreements.end(), [](const Agreement& a) { return a.ok; });
}

namespace {

// Predictions this small are reported but not compared: a relative error
// against fit noise says nothing.
constexpr double kComparable = 1e-12;

void compare(Report& r, const char* coeff, const char* source, double predicted, double fitted) {
  if (std::abs(predicted) <= kComparable) return;
  Agreement a;
  a.coefficient = coeff;
  a.source = source;
  a.predicted = predicted;
  a.fitted = fitted;
  a.rel_error = relative_error(predicted, fitted);
  a.ok = a.rel_error <= r.config.tol.agreement;
  r.agreements.push_back(a);
}

ComplexMatrix normalized(const ComplexMatrix& h) {
  const double n = h.frobenius_norm();
  return n > 0.0 ? (1.0 / n) * h : h;
}

}  // namespace

Report run_scenario(const ScenarioConfig& cfg) {
  Report r;
  r.config = cfg;
  const BipartiteState state = build_state(cfg);
  const TMatrixPair pair = build_pair(cfg, state);
  const PerturbConfig pcfg = perturb_config(cfg.tol);

  r.verdict = classify(state, pair.t1, pcfg.criteria);
  const SpecialFormResult sf = check_special_form(state, cfg.tol.commutator_tol);
  r.special_form = sf.ok;
  r.special_form_defect = sf.defect;
  r.unitarity = verify_unitarity(pair, cfg.lambda_grid.front(), 1e-10);
  if (cfg.mode == Mode::Check) return r;

  r.prediction = predict(state, pair, pcfg);
  if (const auto* th = std::get_if<ThermalSpec>(&cfg.state); th && !th->b_energies.empty()) {
    r.thermal_coeff = thermal_delta_s(th->energies, th->beta, th->b_index, pair.t1, th->b_energies,
                                      pcfg.energy_tol);
  }
  if (cfg.mode == Mode::Predict) return r;

  const auto records = sweep_records(state, pair.t1, cfg.lambda_grid);
  std::vector<double> ds;
  SanitySummary sanity;
  for (const auto& rec : records) {
    ds.push_back(rec.delta_s_a);
    ++sanity.evolutions;
    sanity.full_entropy_change = std::max(sanity.full_entropy_change, rec.full_entropy_change);
    sanity.spectrum_defect = std::max(sanity.spectrum_defect, rec.spectrum_defect);
    sanity.trace_defect = std::max(sanity.trace_defect, rec.trace_defect);
  }
  r.sanity = sanity;
  r.fit = fit_coefficients(cfg.lambda_grid, ds);

  const auto& p = r.prediction;
  if (p.order1_coeff) compare(r, "a", "first_order", *p.order1_coeff, r.fit->a);
  if (r.verdict.kernel_nonempty) compare(r, "b", "log_coefficient", p.log_coeff, r.fit->b);
  if (p.order2_coeff) compare(r, "c", p.commutation_ok ? "full_rank" : "general", *p.order2_coeff, r.fit->c);
  if (r.thermal_coeff) compare(r, "c", "thermal", *r.thermal_coeff, r.fit->c);

  if (cfg.mode == Mode::Demon) r.demon = demon_search(cfg, cfg.demon.budget, cfg.demon.seed);
  if (cfg.mode == Mode::Probe) r.probe = guarantee_probe(cfg, cfg.probe.samples, cfg.probe.seed);
  return r;
}

DemonResult demon_search(const ScenarioConfig& cfg, std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::ConfigError, "demon budget must be at least 1");
  const BipartiteState state = build_state(cfg);
  const std::size_t d = state.dim();
  DemonResult res;
  res.budget = budget;
  res.seed = seed;
  res.lambda = cfg.demon.lambda;
  res.delta_s_best = INFINITY;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::uniform_int_distribution<int> part(0, 1);
  std::size_t evals = 0;
  std::size_t restart = 0;

  auto evaluate = [&](const ComplexMatrix& h, const char* move, double step, const std::string& desc) {
    const double v = exact_delta_entropy(state, h, res.lambda);
    ++evals;
    if (v < res.delta_s_best) {
      res.delta_s_best = v;
      res.t1_best = h;
      res.description = desc;
    }
    res.trace.push_back({evals, move, v, res.delta_s_best, step});
    return v;
  };

  while (evals < budget) {
    ++restart;
    const std::string tag = "restart " + std::to_string(restart);
    ComplexMatrix cur = normalized(random_hermitian(d, rng()));
    double cur_v = evaluate(cur, "sample", 0.0, tag + ", gaussian sample");
    if (evals < budget) {
      // Odd orders change sign with t1, so the mirror image is always worth a look.
      const ComplexMatrix flipped = -1.0 * cur;
      const double fv = evaluate(flipped, "flip", 0.0, tag + ", sign flip");
      if (fv < cur_v) {
        cur = flipped;
        cur_v = fv;
      }
    }
    double step = 0.25;
    int stagnant = 0;
    int halvings = 0;
    while (evals < budget && halvings < 6) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      const double sign = part(rng) ? 1.0 : -1.0;
      ComplexMatrix cand = cur;
      if (i == j) {
        cand(i, i) += sign * step;
      } else {
        const cplx delta = part(rng) ? cplx(sign * step, 0.0) : cplx(0.0, sign * step);
        cand(i, j) += delta;
        cand(j, i) = std::conj(cand(i, j));
      }
      cand = normalized(cand);
      std::ostringstream desc;
      desc << tag << ", coordinate (" << i << "," << j << ") step " << step;
      const double v = evaluate(cand, "coordinate", step, desc.str());
      if (v < cur_v) {
        cur = std::move(cand);
        cur_v = v;
        stagnant = 0;
      } else if (++stagnant >= 20) {
        step *= 0.5;
        stagnant = 0;
        ++halvings;
      }
    }
  }
  return res;
}

ProbeResult guarantee_probe(const ScenarioConfig& cfg, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::ConfigError, "probe needs at least one sample");
  const BipartiteState state = build_state(cfg);
  const PerturbConfig pcfg = perturb_config(cfg.tol);
  ProbeResult res;
  res.samples = samples;
  res.seed = seed;
  res.lambda = cfg.probe.lambda;
  res.verdict = classify(state, build_t1(cfg, state), pcfg.criteria).overall;
  if (res.verdict == Guarantee::NoGuarantee) {
    throw Error(ErrorCode::PreconditionViolated, "scenario '" + cfg.name + "' carries no guarantee to probe");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> seeds(samples);
  for (auto& s : seeds) s = rng();
  std::vector<double> ds(samples);
  std::vector<char> strict(samples);
  parallel_for(samples, [&](std::size_t i) {
    const ComplexMatrix t1 = sample_t1(cfg, state, seeds[i]);
    ds[i] = exact_delta_entropy(state, t1, res.lambda);
    strict[i] = classify(state, t1, pcfg.criteria).overall == Guarantee::StrictIncrease;
  });

  res.min_delta_s = ds[0];
  for (std::size_t i = 0; i < samples; ++i) {
    if (ds[i] < res.min_delta_s) {
      res.min_delta_s = ds[i];
      res.argmin_sample = i;
    }
    if (strict[i] && ds[i] < -cfg.tol.probe) res.violation = true;
  }
  res.argmin_seed = seeds[res.argmin_sample];
  return res;
}

namespace {

ScenarioConfig base(const std::string& name, std::size_t da, std::size_t db) {
  ScenarioConfig c;
  c.name = name;
  c.dim_a = da;
  c.dim_b = db;
  c.lambda_grid = default_lambda_grid();
  return c;
}

ScenarioConfig fullrank(double x, double y, const std::string& tag_x, const std::string& tag_y) {
  ScenarioConfig c = base("fullrank-x" + tag_x + "-y" + tag_y, 2, 2);
  c.state = ProductSpec{{x, 1.0 - x}, {y, 1.0 - y}};
  // Exchange |1, 2~> <-> |2, 1~> only.
  c.t = StructuredT{{{0, 1, 1, 0, cplx(0.7, 0.0)}}};
  return c;
}

}  // namespace

std::vector<ScenarioConfig> builtin_scenarios() {
  std::vector<ScenarioConfig> out;

  {
    ScenarioConfig c = base("pure-product-2x2", 2, 2);
    c.state = PureSpec{{1.0, 0.0, 0.0, 0.0}};
    c.t = StructuredT{{{0, 0, 1, 1, cplx(0.8, 0.3)}}};
    out.push_back(c);
  }
  for (const auto& [x, tx] : {std::pair{0.75, "075"}, std::pair{0.6, "060"}})
    for (const auto& [y, ty] : {std::pair{0.0, "00"}, std::pair{0.5, "05"}, std::pair{1.0, "10"}})
      out.push_back(fullrank(x, y, tx, ty));
  {
    ScenarioConfig c = base("thermal-ground", 3, 2);
    c.state = ThermalSpec{{0.0, 1.0, 2.0}, 1.0, 0, {0.0, 1.0}};
    // A gives one quantum to B: |1,0~> <-> |0,1~> and |2,0~> <-> |1,1~>.
    c.t = StructuredT{{{1, 0, 0, 1, cplx(0.6, 0.0)}, {2, 0, 1, 1, cplx(0.4, 0.2)}}};
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("thermal-inverted", 3, 2);
    c.state = ThermalSpec{{0.0, 1.0, 2.0}, 1.0, 1, {0.0, 1.0}};
    // B starts excited and can only drop: |0,1~> <-> |1,0~> and |1,1~> <-> |2,0~>.
    c.t = StructuredT{{{0, 1, 1, 0, cplx(0.6, 0.0)}, {1, 1, 2, 0, cplx(0.4, 0.2)}}};
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("bell-counterexample", 2, 2);
    c.state = PureSpec{{std::sqrt(0.7), 0.0, 0.0, std::sqrt(0.3)}};
    c.t = StructuredT{{{0, 0, 1, 1, cplx(0.0, 0.5)}}};
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("bell-max", 2, 2);
    c.state = PureSpec{{std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5)}};
    c.t = StructuredT{{{0, 0, 1, 1, cplx(0.0, 0.5)}}};
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("null-kron-a", 3, 2);
    c.state = ProductSpec{{0.6, 0.4, 0.0}, {0.7, 0.3}};
    c.t = KronAT{{{0, 1, cplx(0.5, 0.2)}, {1, 2, cplx(0.3, 0.0)}, {0, 0, cplx(0.1, 0.0)}, {2, 2, cplx(-0.4, 0.0)}}};
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("superselection-protected", 2, 2);
    c.state = ProductSpec{{1.0, 0.0}, {0.6, 0.4}};
    c.t = ProtectedT{7, 1.0};
    c.mode = Mode::Probe;
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("projector-kernel", 3, 2);
    c.state = ProductSpec{{0.5, 0.5, 0.0}, {1.0, 0.0}};
    c.t = RandomT{11, 1.0};
    c.mode = Mode::Demon;
    out.push_back(c);
  }
  {
    ScenarioConfig c = base("diagonal-separable-kernel", 3, 2);
    c.state = DiagonalSpec{{{0.3, 0.1}, {0.15, 0.45}, {0.0, 0.0}}};
    c.t = RandomT{5, 1.0};
    c.mode = Mode::Probe;
    out.push_back(c);
  }
  return out;
}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name) {
  for (auto& c : builtin_scenarios())
    if (c.name == name) return c;
  return std::nullopt;
}

std::vector<SuiteEntry> run_suite(const std::vector<ScenarioConfig>& scenarios) {
  std::vector<SuiteEntry> out(scenarios.size());
  parallel_for(scenarios.size(), [&](std::size_t i) {
    out[i].name = scenarios[i].name;
    try {
      out[i].report = run_scenario(scenarios[i]);
    } catch (const Error& e) {
      out[i].error = e.what();
      out[i].error_code = e.code();
    }
  });
  return out;
}

}  // namespace scatent
