#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/hilbert.hpp"
#include "decolab/runner.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {
namespace {

ParamSpec real_param(std::string name, double def, std::optional<double> lower, bool lower_inclusive,
                     std::string description) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::real;
  p.default_value = def;
  p.lower = lower;
  p.lower_inclusive = lower_inclusive;
  p.description = std::move(description);
  return p;
}

ParamSpec positive(std::string name, double def, std::string description) {
  return real_param(std::move(name), def, 0.0, false, std::move(description));
}

ParamSpec nonnegative(std::string name, double def, std::string description) {
  return real_param(std::move(name), def, 0.0, true, std::move(description));
}

ParamSpec integer_param(std::string name, std::int64_t def, std::int64_t lower,
                        std::string description) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::integer;
  p.default_value = def;
  p.lower = static_cast<double>(lower);
  p.description = std::move(description);
  return p;
}

ParamSpec complex_param(std::string name, ComplexList def, std::string description) {
  ParamSpec p;
  p.name = std::move(name);
  p.kind = ParamKind::complex_list;
  p.default_value = std::move(def);
  p.description = std::move(description);
  return p;
}

std::string num(double v) { return format_real(v); }

InvariantAudit audit_of(const Matrix& rho_times_dx) {
  InvariantAudit a;
  a.trace_drift = std::abs(rho_times_dx.trace().real() - 1.0);
  a.hermiticity_drift = hermiticity_error(rho_times_dx);
  a.min_eigenvalue = min_eigenvalue(rho_times_dx);
  return a;
}


// ------------------------------------------------------------------ runners

ScenarioResult run_two_slit_scenario(const RunConfig& cfg) {
  TwoSlitConfig c;
  c.separation = cfg.real("separation");
  c.packet_width = cfg.real("packet_width");
  c.mass = cfg.real("mass");
  c.lambda = cfg.real("lambda");
  c.t_final = cfg.real("t_final");
  c.dt = cfg.real("dt");
  c.grid_points = static_cast<std::size_t>(cfg.integer("grid_points"));
  c.record_stride = cfg.record_stride;
  TwoSlitRun run = run_two_slit(c);

  ScenarioResult r;
  r.audit = audit_of(run.final_state.rho() * run.final_state.grid().dx());
  const auto fit = fit_exponential(run.trace.times(), run.trace.column("visibility"), 0.0,
                                   c.t_final, true);
  const double d = run.effective_separation;
  const auto vis = run.trace.column("visibility");
  const bool decayed = 1.0 - *std::min_element(vis.begin(), vis.end()) > 1e-9 && fit.rate > 0.0;
  r.summary = {{"label", "two-slit"},
               {"effective_separation", num(d)},
               {"visibility_rate", num(fit.rate)},
               {"closed_form_rate", num(c.lambda * d * d)},
               {"visibility_half_life", decayed ? num(std::numbers::ln2 / fit.rate) : "none detected"},
               {"final_visibility", num(run.trace.value(run.trace.size() - 1, "visibility"))}};
  r.fit_column = "visibility";
  r.fit_begin = 0.0;
  r.fit_end = c.t_final;
  r.trace = std::move(run.trace);
  return r;
}

ScenarioResult run_chiral_scenario(const RunConfig& cfg) {
  ChiralConfig c;
  c.omega = cfg.real("omega");
  c.gamma = cfg.real("gamma");
  c.t_final = cfg.real("t_final");
  c.dt = cfg.real("dt");
  c.record_stride = cfg.record_stride;
  ChiralRun run = run_chiral(c);

  ScenarioResult r;
  r.audit = audit_of(run.final_state.entries());
  const std::string regime(to_string(classify_regime(c)));
  const auto last = run.trace.size() - 1;
  r.summary = {{"label", regime},
               {"regime", regime},
               {"relaxation_time_3_4", num(chiral_relaxation_time(run.trace))},
               {"zeno_rate_estimate", num(c.gamma > 0.0 ? c.omega * c.omega / (2.0 * c.gamma) : 0.0)},
               {"final_P_L", num(run.trace.value(last, "P_L"))},
               {"final_coherence", num(run.trace.value(last, "coherence"))}};
  r.fit_column = "purity";
  r.fit_begin = 0.0;
  r.fit_end = c.t_final;
  r.trace = std::move(run.trace);
  return r;
}

ScenarioResult run_charge_scenario(const RunConfig& cfg) {
  ChargeModel model;
  model.amplitudes = cfg.complex_list("amplitudes");
  const double overlap = cfg.real("overlap");
  model.per_shell_overlap = ChargeModel::uniform_overlap(model.amplitudes.size(), overlap);
  const auto shells = static_cast<std::size_t>(cfg.integer("shells"));
  const std::size_t stride = cfg.record_stride;

  // Time column: number of shells r.
  ObservableTrace trace({"coherence", "purity", "entropy"});
  DensityMatrix last = charge_reduced_density(model);
  for (std::size_t r = 0; r <= shells; ++r) {
    if (r % stride != 0 && r != shells) continue;
    model.shells = r;
    last = charge_reduced_density(model);
    trace.add(static_cast<double>(r),
              {offdiagonal_coherence(last), purity(last), entanglement_entropy(last)});
  }
  ScenarioResult res;
  res.audit = audit_of(last.entries());
  res.summary = {{"label", "charge-shells"},
                 {"per_shell_rate", num(overlap > 0.0 ? -std::log(std::abs(overlap)) : INFINITY)},
                 {"final_offdiagonal_factor",
                  num(overlap == 0.0 && shells > 0 ? 0.0 : std::pow(std::abs(overlap), static_cast<double>(shells)))},
                 {"final_coherence", num(offdiagonal_coherence(last))}};
  res.fit_column = "coherence";
  res.fit_begin = 0.0;
  res.fit_end = static_cast<double>(shells);
  res.trace = std::move(trace);
  return res;
}

DecayConfig decay_config(const RunConfig& cfg, bool monitored) {
  DecayConfig c;
  c.n_modes = static_cast<std::size_t>(cfg.integer("n_modes"));
  c.mode_spacing = cfg.real("mode_spacing");
  c.coupling = cfg.real("coupling");
  c.detuning = cfg.real("detuning");
  c.t_final = cfg.real("t_final");
  c.dt = cfg.real("dt");
  c.monitored = monitored;
  if (monitored) c.monitor_rate = cfg.real("monitor_rate");
  c.record_stride = cfg.record_stride;
  return c;
}

ScenarioResult run_decay_scenario(const RunConfig& cfg) {
  const DecayConfig c = decay_config(cfg, false);
  DecayRun run = run_decay(c);
  const double gamma = golden_rule_rate(c);
  const auto& t = run.trace.times();
  const auto p = run.trace.column("survival");
  const auto rev = revival_time(c);
  double peak = 0.0, peak_t = NAN;
  if (rev)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::abs(t[i] - *rev) <= 0.25 * *rev && p[i] > peak) {
        peak = p[i];
        peak_t = t[i];
      }
  const auto fit = fit_exponential(t, p, 0.5 / gamma, 2.0 / gamma);

  ScenarioResult r;
  r.audit.trace_drift = run.norm_drift;
  r.summary = {{"label", "decay-cavity"},
               {"golden_rule_rate", num(gamma)},
               {"fitted_rate", num(fit.rate)},
               {"revival_time", num(rev ? *rev : NAN)},
               {"revival_peak", num(peak)},
               {"revival_peak_time", num(peak_t)}};
  r.fit_column = "survival";
  r.fit_begin = 0.5 / gamma;
  r.fit_end = 2.0 / gamma;
  r.trace = std::move(run.trace);
  return r;
}

ScenarioResult run_monitored_decay_scenario(const RunConfig& cfg) {
  const DecayConfig c = decay_config(cfg, true);
  DecayRun run = run_decay(c);
  const double rate = monitored_rate(c);
  const auto& t = run.trace.times();
  const auto p = run.trace.column("survival");
  const auto fit = fit_exponential(t, p, 0.0, 3.0 / rate);
  double late = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] > 0.5 * c.final_time()) late = std::max(late, p[i]);

  ScenarioResult r;
  r.audit.trace_drift = run.norm_drift;
  r.audit.hermiticity_drift = run.hermiticity_error;
  r.audit.min_eigenvalue = run.min_eigenvalue;
  r.summary = {{"label", "decay-monitored"},
               {"golden_rule_rate", num(golden_rule_rate(c))},
               {"monitored_rate", num(rate)},
               {"fitted_rate", num(fit.rate)},
               {"fit_max_abs_residual", num(fit.max_abs_residual)},
               {"late_max_survival", num(late)}};
  r.fit_column = "survival";
  r.fit_begin = 0.0;
  r.fit_end = 3.0 / rate;
  r.trace = std::move(run.trace);
  return r;
}

ScenarioResult run_chain_scenario(const RunConfig& cfg) {
  MeasurementChain chain;
  chain.amplitudes = cfg.complex_list("amplitudes");
  const std::size_t n = chain.amplitudes.size();
  chain.apparatus_dim = chain.environment_dim = chain.observer_dim = n;
  chain.seed = cfg.seed;
  chain.validate();
  const auto runs = static_cast<std::uint64_t>(cfg.integer("runs"));
  const auto checkpoints = static_cast<std::uint64_t>(cfg.integer("checkpoints"));
  const std::uint64_t every = std::max<std::uint64_t>(1, runs / checkpoints);

  std::vector<std::string> columns;
  for (std::size_t k = 0; k < n; ++k) columns.push_back("f" + std::to_string(k));
  ObservableTrace trace(columns);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t run = 0; run < runs; ++run) {
    ++counts[sample_chain_outcome(chain, cfg.seed, run)];
    const std::uint64_t done = run + 1;
    if (done % every == 0 || done == runs) {
      std::vector<double> f(n);
      for (std::size_t k = 0; k < n; ++k) f[k] = static_cast<double>(counts[k]) / static_cast<double>(done);
      trace.add(static_cast<double>(done), std::move(f));
    }
  }
  // Sanity: the sequential tally must equal the parallel sampler.
  const FrequencyRecord record = run_chain(chain, runs, cfg.seed);
  if (record.counts != counts) throw InvariantError("sampler order independence", 1.0);

  ScenarioResult r;
  const DensityMatrix rho_app = [&] {
    const std::size_t keep[] = {1};
    return partial_trace(density_of(build_chain_state(chain, ChainStage::decoh)), keep);
  }();
  r.audit = audit_of(rho_app.entries());
  double worst_z = 0.0;
  r.summary = {{"label", "born-chain"}, {"runs", std::to_string(runs)}};
  for (std::size_t k = 0; k < n; ++k) {
    const double p = std::norm(chain.amplitudes[k]);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
    const double f = record.frequency(k);
    if (sigma > 0.0) worst_z = std::max(worst_z, std::abs(f - p) / sigma);
    r.summary.emplace_back("f" + std::to_string(k), num(f));
    r.summary.emplace_back("born" + std::to_string(k), num(p));
  }
  r.summary.emplace_back("max_z_score", num(worst_z));
  r.trace = std::move(trace);
  return r;
}

std::vector<ParamSpec> chiral_params(double omega, double gamma, double t_final, double dt) {
  return {nonnegative("omega", omega, "tunnelling angular frequency"),
          nonnegative("gamma", gamma, "chirality monitoring strength"),
          positive("t_final", t_final, "final time"), positive("dt", dt, "time step")};
}

std::vector<ParamSpec> decay_params(double dt) {
  return {integer_param("n_modes", 201, 1, "number of bath modes"),
          positive("mode_spacing", 0.1, "mode spacing"),
          nonnegative("coupling", 0.125, "level-mode coupling g"),
          real_param("detuning", 0.0, std::nullopt, true, "offset of the mode comb"),
          nonnegative("t_final", 0.0, "final time (0: 1.5 revival times)"),
          positive("dt", dt, "time step")};
}

std::vector<ScenarioInfo> build_registry() {
  std::vector<ScenarioInfo> out;

  ParamSpec mass = positive("mass", GridDensityMatrix::kFrozenMass, "particle mass (inf: frozen kinetics)");
  mass.allow_infinity = true;
  out.push_back({"two-slit",
                 "Two-packet superposition under the localization master equation",
                 {positive("separation", 8.0, "packet separation d"),
                  positive("packet_width", 0.5, "packet position width"), mass,
                  nonnegative("lambda", 0.05, "localization rate"),
                  positive("t_final", 4.0, "final time"), positive("dt", 0.01, "time step"),
                  integer_param("grid_points", 256, 16, "grid size (power of two)")},
                 run_two_slit_scenario});

  // Time unit 1 ns: γ = 1 is the 1e-9 s monitoring scale of a sugar molecule
  // in air; the parity splitting is negligible against it.
  out.push_back({"chiral-sugar", "Chiral two-level system under strong monitoring (Zeno regime)",
                 chiral_params(1e-3, 1.0, 10.0, 0.05), run_chiral_scenario});
  out.push_back({"chiral-ph3-like", "Chiral two-level system under weak monitoring",
                 chiral_params(1.0, 0.05, 20.0, 0.01), run_chiral_scenario});

  ParamSpec overlap = real_param("overlap", 0.99, 0.0, true, "per-shell field overlap");
  overlap.upper = 1.0;
  out.push_back({"charge-shells", "Charge superposition decohered shell by shell (time = shells)",
                 {complex_param("amplitudes", {cplx(0.6), cplx(0.8)}, "charge amplitudes c_q"),
                  overlap, integer_param("shells", 1000, 0, "number of shells R")},
                 run_charge_scenario});

  out.push_back({"decay-cavity", "Excited level coupled to a uniform mode comb: decay and revival",
                 decay_params(0.05), run_decay_scenario});
  auto monitored = decay_params(0.005);
  monitored.push_back(positive("monitor_rate", 49.087, "excited/decayed dephasing rate"));
  out.push_back({"decay-monitored", "Decay with continuous excited/decayed dephasing",
                 std::move(monitored), run_monitored_decay_scenario});

  out.push_back({"born-chain", "Measurement chain outcomes sampled from |c_n|² (time = runs)",
                 {complex_param("amplitudes", {cplx(0.6), cplx(0.0, 0.8)}, "system amplitudes c_n"),
                  integer_param("runs", 100000, 1, "number of runs N"),
                  integer_param("checkpoints", 100, 1, "rows in the frequency trace")},
                 run_chain_scenario});
  return out;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry = build_registry();
  return registry;
}

const ScenarioInfo& find_scenario(std::string_view name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : scenario_registry()) known += (known.empty() ? "" : ", ") + s.name;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace decolab
