// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decolab/hilbert.hpp"
#include "decolab/localization.hpp"
#include "decolab/premeasurement.hpp"
#include "decolab/runner.hpp"
#include "decolab/scenarios.hpp"
#include "oracles.hpp"

using namespace decolab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<std::size_t> random_dims(std::mt19937_64& rng, std::size_t max_factors, std::size_t max_dim) {
  const std::size_t f = 1 + rng() % max_factors;
  std::vector<std::size_t> dims(f);
  for (auto& d : dims) d = 1 + rng() % max_dim;
  return dims;
}

std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::size_t> random_subset(std::mt19937_64& rng, std::size_t n, bool nonempty) {
  std::vector<std::size_t> out;
  do {
    out.clear();
    for (std::size_t f = 0; f < n; ++f)
      if (rng() % 2) out.push_back(f);
  } while (nonempty && out.empty());
  return out;
}

PointerCoupling random_coupling(std::mt19937_64& rng, std::size_t sys, std::size_t env) {
  std::vector<StateVector> pointers;
  for (std::size_t n = 0; n < sys; ++n) pointers.emplace_back(oracle::random_state(rng, env));
  return PointerCoupling(StateVector(oracle::random_state(rng, env)), std::move(pointers));
}

double slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  return (n * sty - st * sy) / (n * stt - st * st);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome kinematics() {
  Outcome out;
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto dims = random_dims(rng, 4, 3);
    const std::size_t n = product(dims);
    const SubsystemSplit split(dims);

    const Matrix rho = oracle::random_density(rng, n);
    const auto keep = random_subset(rng, dims.size(), true);
    const DensityMatrix dm(rho, split);
    worst = std::max(worst, oracle::max_abs(partial_trace(dm, keep).entries() -
                                            oracle::partial_trace(rho, dims, keep)));

    const Matrix a = oracle::random_hermitian(rng, n);
    worst = std::max(worst, std::abs(expectation(Observable(a, split), dm) -
                                     oracle::trace_product(a, rho).real()));

    const auto dims_b = random_dims(rng, 2, 3);
    const Vector u = oracle::random_state(rng, n);
    const Vector v = oracle::random_state(rng, product(dims_b));
    const auto joint = tensor_product(StateVector(u, split), StateVector(v, SubsystemSplit(dims_b)));
    worst = std::max(worst, oracle::max_abs(joint.amplitudes() - oracle::kron(u, v)));
    out.require(joint.split().factors() == dims.size() + dims_b.size(), "tensor split factor count");

    worst = std::max(worst, oracle::max_abs(density_of(StateVector(u, split)).entries() - oracle::outer(u)));
  }
  out.require(worst <= 1e-12, fmt("max deviation %.3g", worst));
  if (out.pass) out.detail = fmt("max deviation %.3g over 200 instances", worst);
  return out;
}

Outcome schmidt_suite() {
  Outcome out;
  std::mt19937_64 rng(1002);
  double sum_err = 0.0, dual_err = 0.0, rec_err = 0.0;
  int done = 0;
  while (done < 200) {
    const auto dims = random_dims(rng, 3, 4);
    if (dims.size() < 2) continue;
    const auto local = random_subset(rng, dims.size(), true);
    if (local.size() == dims.size()) continue;
    const SubsystemSplit split(dims);
    const StateVector psi(oracle::random_state(rng, product(dims)), split);
    const auto dec = schmidt(psi, local);
    if (dec.degenerate) continue;
    ++done;

    double s = 0.0;
    for (double p : dec.probabilities) s += p;
    sum_err = std::max(sum_err, std::abs(s - 1.0));

    const std::vector<std::size_t> rest = split.complement(local);
    const Matrix full = oracle::outer(psi.amplitudes());
    for (const std::vector<std::size_t>* block : {&local, &rest}) {
      const Matrix red = oracle::partial_trace(full, dims, *block);
      Eigen::SelfAdjointEigenSolver<Matrix> es(red);
      std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
      std::sort(ev.rbegin(), ev.rend());
      for (std::size_t k = 0; k < ev.size(); ++k) {
        const double p = k < dec.rank() ? dec.probabilities[k] : 0.0;
        dual_err = std::max(dual_err, std::abs(ev[k] - p));
      }
    }
    rec_err = std::max(rec_err, oracle::max_abs(reconstruct(dec).amplitudes() - psi.amplitudes()));
  }
  out.require(sum_err <= 1e-12, fmt("sum p deviation %.3g", sum_err));
  out.require(dual_err <= 1e-10, fmt("dual spectrum deviation %.3g", dual_err));
  out.require(rec_err <= 1e-10, fmt("reconstruction deviation %.3g", rec_err));

  const SubsystemSplit qq({2, 2});
  const std::size_t first[] = {0};
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::numbers::sqrt2;
  const auto b = schmidt(StateVector(bell, qq), first);
  out.require(b.rank() == 2 && std::abs(b.probabilities[0] - 0.5) < 1e-15 &&
                  std::abs(b.probabilities[1] - 0.5) < 1e-15,
              "Bell probabilities");
  out.require(std::abs(entanglement_entropy(partial_trace(density_of(StateVector(bell, qq)), first)) -
                       std::numbers::ln2) < 1e-12,
              "Bell entropy");
  out.require(oracle::max_abs(reconstruct(b).amplitudes() - bell) < 1e-15, "Bell reconstruction");

  Vector prod = Vector::Zero(4);
  prod(1) = 1.0;
  const auto pr = schmidt(StateVector(prod, qq), first);
  out.require(pr.rank() == 1 && pr.probabilities[0] == 1.0, "product rank");
  out.require(entanglement_entropy(partial_trace(density_of(StateVector(prod, qq)), first)) == 0.0,
              "product entropy");
  if (out.pass)
    out.detail = fmt("sum %.2g, dual %.2g", sum_err, dual_err) + fmt(", reconstruction %.2g", rec_err);
  return out;
}

Outcome erasure() {
  Outcome out;
  std::mt19937_64 rng(1003);
  double full_err = 0.0, partial_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t sys = 2 + rng() % 2;
    const std::size_t k = 1 + rng() % 3;
    std::vector<PointerCoupling> cs;
    for (std::size_t j = 0; j < k; ++j) cs.push_back(random_coupling(rng, sys, 2 + rng() % 2));
    const StateVector psi(oracle::random_state(rng, sys));
    const auto joint = premeasure_sequence(psi, cs);

    std::vector<std::size_t> all(k);
    for (std::size_t j = 0; j < k; ++j) all[j] = j;
    Vector expected = psi.amplitudes();
    for (const auto& c : cs) expected = oracle::kron(expected, c.ready().amplitudes());
    full_err = std::max(full_err, oracle::max_abs(erase(joint, cs, all).amplitudes() - expected));

    const auto subset = random_subset(rng, k, false);
    std::vector<PointerCoupling> rest;
    for (std::size_t j = 0; j < k; ++j)
      if (std::find(subset.begin(), subset.end(), j) == subset.end()) rest.push_back(cs[j]);
    const auto partial = erase(joint, cs, subset);
    const Matrix red = oracle::partial_trace(oracle::outer(partial.amplitudes()), partial.split().dims(), {0});
    for (std::size_t m = 0; m < sys; ++m)
      for (std::size_t n = 0; n < sys; ++n) {
        cplx factor = 1.0;
        if (!rest.empty()) factor = decoherence_factor(ScattererChain::from_couplings(rest), m, n, rest.size());
        const cplx want = psi[m] * std::conj(psi[n]) * factor;
        partial_err = std::max(partial_err, std::abs(red(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) - want));
      }
  }
  out.require(full_err <= 1e-12, fmt("full erase deviation %.3g", full_err));
  out.require(partial_err <= 1e-12, fmt("partial erase deviation %.3g", partial_err));
  if (out.pass) out.detail = fmt("full %.2g, partial %.2g over 100 instances", full_err, partial_err);
  return out;
}

Outcome frozen_closed_form() {
  Outcome out;
  const GridSpec grid(128, -10.0, 10.0);
  const double lambda = 0.05;
  const auto s0 = GridDensityMatrix::pure(grid, gaussian_packet(grid, 0.0, 1.0), GridDensityMatrix::kFrozenMass, lambda);
  EvolveOptions opt;
  opt.positivity_stride = 100;
  const auto ev = evolve(s0, 1.0, 1e-3, opt);
  out.require(ev.trace.size() == 1001, "expected 10^3 steps");
  const auto x = grid.positions();
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      const double u = x[i] - x[j];
      err = std::max(err, std::abs(ev.state.rho()(a, b) - s0.rho()(a, b) * std::exp(-lambda * u * u)));
    }
  const double tr_err = std::abs(ev.state.trace() - 1.0);
  const double min_ev = ev.state.min_eigenvalue();
  out.require(err <= 1e-10, fmt("closed-form deviation %.3g", err));
  out.require(tr_err <= kTraceTolerance, fmt("trace deviation %.3g", tr_err));
  out.require(min_ev >= kPositivityFloor, fmt("min eigenvalue %.3g", min_ev));
  if (out.pass) out.detail = fmt("deviation %.2g, trace %.2g", err, tr_err) + fmt(", min eigenvalue %.2g", min_ev);
  return out;
}

Outcome moment_oracle() {
  Outcome out;
  const GridSpec grid(256, -20.0, 20.0);
  const double mass = 1.0, lambda = 0.5, t = 1.0;
  const auto s0 = GridDensityMatrix::pure(grid, gaussian_packet(grid, 0.0, 1.0), mass, lambda);
  const auto expected = oracle::moments_closed_form({1.0, 0.0, 0.25}, mass, lambda, t);
  EvolveOptions opt;
  opt.record = {"var_pp"};
  double errs[2];
  double edge = 0.0, rate = 0.0;
  const double dts[2] = {0.05, 0.025};
  for (int k = 0; k < 2; ++k) {
    const auto ev = evolve(s0, t, dts[k], opt);
    const auto m = moments(ev.state);
    errs[k] = std::max({std::abs(m.var_xx / expected.var_xx - 1.0), std::abs(m.cov_xp / expected.cov_xp - 1.0),
                        std::abs(m.var_pp / expected.var_pp - 1.0)});
    edge = std::max(edge, ev.state.edge_density());
    if (k == 0) rate = slope(ev.trace.times(), ev.trace.column("var_pp"));
  }
  const double ratio = errs[0] / errs[1];
  out.require(errs[0] <= 1e-3 && errs[1] <= 1e-3, fmt("relative error %.3g / %.3g", errs[0], errs[1]));
  out.require(std::abs(rate / (2.0 * lambda) - 1.0) <= 0.01, fmt("var_pp slope %.6g", rate));
  out.require(ratio >= 3.0, fmt("halving dt improved by %.3g", ratio));
  out.require(edge < 1e-6, fmt("edge density %.3g", edge));
  if (out.pass)
    out.detail = fmt("relative error %.2g -> %.2g", errs[0], errs[1]) + fmt(" (x%.2f), slope %.6f", ratio, rate);
  return out;
}

Outcome two_slit() {
  Outcome out;
  double worst = 0.0;
  double rates[2];
  const double seps[2] = {4.0, 8.0};
  for (int k = 0; k < 2; ++k) {
    TwoSlitConfig cfg;
    cfg.separation = seps[k];
    cfg.grid_extent = 32.0;
    cfg.lambda = 0.05;
    cfg.t_final = std::round(3.0 / (cfg.lambda * seps[k] * seps[k]) / cfg.dt) * cfg.dt;
    const auto run = run_two_slit(cfg);
    out.require(run.effective_separation == seps[k], "packet centres off the grid");
    const auto v = run.trace.column("visibility");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double closed = std::exp(-cfg.lambda * seps[k] * seps[k] * run.trace.times()[i]);
      worst = std::max(worst, std::abs(v[i] / closed - 1.0));
    }
    rates[k] = fit_exponential(run.trace.times(), v, 0.0, cfg.t_final, true).rate;
  }
  const double ratio = rates[1] / rates[0];
  out.require(worst <= 0.02, fmt("visibility deviation %.3g", worst));
  out.require(std::abs(ratio - 4.0) <= 0.1, fmt("exponent ratio %.4g", ratio));
  if (out.pass) out.detail = fmt("visibility deviation %.2g, exponent ratio %.6f", worst, ratio);
  return out;
}

Outcome chiral() {
  Outcome out;
  ChiralConfig rabi;
  rabi.omega = 1.0;
  rabi.t_final = 20.0;
  rabi.dt = 0.01;
  const auto r = chiral_dynamics(rabi);
  double rabi_err = 0.0;
  const auto pl = r.column("P_L");
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double c = std::cos(rabi.omega * r.times()[i] / 2.0);
    rabi_err = std::max(rabi_err, std::abs(pl[i] - c * c));
  }
  out.require(rabi_err < 1e-4, fmt("Rabi deviation %.3g", rabi_err));

  ChiralConfig frozen;
  frozen.omega = 0.0;
  frozen.gamma = 5.0;
  frozen.dt = 0.01;
  for (double v : chiral_dynamics(frozen).column("P_L")) out.require(v == 1.0, "omega = 0 changed P_L");

  const auto rate_at = [](double gamma) {
    ChiralConfig c;
    c.omega = 1.0;
    c.gamma = gamma;
    c.dt = 0.05 / gamma;
    c.t_final = 2.0 * 2.0 * gamma;
    c.record_stride = 20;
    return chiral_relaxation_rate(chiral_dynamics(c), 1.0, c.t_final);
  };
  const double r50 = rate_at(50.0), r100 = rate_at(100.0);
  out.require(std::abs(r50 / (1.0 / 100.0) - 1.0) <= 0.1, fmt("gamma = 50 omega rate %.5g", r50));
  out.require(std::abs(r50 / r100 - 2.0) <= 0.2, fmt("doubling gamma rate ratio %.4g", r50 / r100));

  double prev = 0.0;
  std::string ladder;
  for (double g : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
    ChiralConfig c;
    c.omega = 1.0;
    c.gamma = g;
    c.dt = 0.05 / g;
    c.t_final = 4.0 * g;
    c.record_stride = 10;
    const double t34 = chiral_relaxation_time(chiral_dynamics(c), 0.75);
    out.require(std::isfinite(t34) && t34 >= prev, fmt("ladder broke at gamma = %g", g));
    prev = t34;
    ladder += fmt(" %.3g", t34);
  }
  if (out.pass)
    out.detail = fmt("Rabi %.2g, rate %.5f", rabi_err, r50) + fmt(" (ratio %.3f), t_3/4:", r50 / r100) + ladder;
  return out;
}

Outcome charge() {
  Outcome out;
  ChargeModel orth;
  orth.amplitudes = {cplx(0.6, 0.0), cplx(0.0, 0.8)};
  orth.shells = 3;
  orth.per_shell_overlap = ChargeModel::uniform_overlap(2, 0.0);
  const auto d = charge_reduced_density(orth);
  out.require(d(0, 0) == cplx(std::norm(orth.amplitudes[0])) && d(1, 1) == cplx(std::norm(orth.amplitudes[1])) &&
                  d(0, 1) == cplx(0.0) && d(1, 0) == cplx(0.0),
              "orthogonal shells not exactly diagonal");

  std::mt19937_64 rng(1008);
  double err_joint = 0.0, err_oracle = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = 2 + rng() % 2;
    const std::size_t shells = 1 + rng() % 4;
    std::vector<oracle::Vec> vs;
    for (std::size_t k = 0; k < q; ++k) vs.push_back(oracle::random_state(rng, 3));
    const oracle::Vec c = oracle::random_state(rng, q);
    ChargeModel m;
    m.amplitudes.assign(c.data(), c.data() + c.size());
    m.shells = shells;
    m.per_shell_overlap.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b)
        m.per_shell_overlap(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = vs[a].dot(vs[b]);

    oracle::Vec joint = oracle::Vec::Zero(static_cast<Eigen::Index>(q * static_cast<std::size_t>(std::pow(3, shells))));
    std::vector<std::size_t> dims{q};
    for (std::size_t a = 0; a < q; ++a) {
      oracle::Vec e = oracle::Vec::Zero(static_cast<Eigen::Index>(q));
      e(static_cast<Eigen::Index>(a)) = c(static_cast<Eigen::Index>(a));
      for (std::size_t s = 0; s < shells; ++s) e = oracle::kron(e, vs[a]);
      joint += e;
    }
    for (std::size_t s = 0; s < shells; ++s) dims.push_back(3);
    const Matrix want = oracle::partial_trace(oracle::outer(joint), dims, {0});
    const Matrix product_path = charge_reduced_density(m).entries();
    err_oracle = std::max(err_oracle, oracle::max_abs(product_path - want));
    err_joint = std::max(err_joint, oracle::max_abs(product_path - charge_reduced_density_joint(m).entries()));
  }
  out.require(err_oracle <= 1e-12, fmt("joint-state oracle deviation %.3g", err_oracle));
  out.require(err_joint <= 1e-12, fmt("premeasurement path deviation %.3g", err_joint));
  if (out.pass) out.detail = fmt("oracle %.2g, premeasurement path %.2g", err_oracle, err_joint);
  return out;
}

Outcome decay() {
  Outcome out;
  DecayConfig c;
  const auto run = run_decay(c);
  const double gamma = golden_rule_rate(c);
  const auto& t = run.trace.times();
  const auto p = run.trace.column("survival");
  double dev = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= 0.5 / gamma && t[i] <= 2.0 / gamma) dev = std::max(dev, std::abs(p[i] / std::exp(-gamma * t[i]) - 1.0));
  const auto fit = fit_exponential(t, p, 0.5 / gamma, 2.0 / gamma);
  out.require(dev <= 0.1, fmt("golden-rule deviation %.3g", dev));
  out.require(std::abs(fit.rate / gamma - 1.0) <= 0.1, fmt("fitted rate / golden rule %.4g", fit.rate / gamma));

  const double rev = *revival_time(c);
  double peak = 0.0, peak_t = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] > 0.5 * rev && p[i] > peak) {
      peak = p[i];
      peak_t = t[i];
    }
  out.require(std::abs(peak_t / rev - 1.0) <= 0.05, fmt("revival at %.4g", peak_t));
  out.require(peak > 0.5, fmt("revival peak %.3g", peak));

  DecayConfig mon = c;
  mon.monitored = true;
  mon.monitor_rate = 50.0 * gamma;
  mon.dt = 0.005;
  const auto mrun = run_decay(mon);
  const double gm = monitored_rate(mon);
  const auto& mt = mrun.trace.times();
  const auto mp = mrun.trace.column("survival");
  double late = 0.0;
  for (std::size_t i = 0; i < mt.size(); ++i)
    if (mt[i] >= 0.75 * rev) late = std::max(late, mp[i]);
  const auto mfit = fit_exponential(mt, mp, 0.0, 3.0 / gm);
  out.require(late < 0.05, fmt("monitored survival near revival %.3g", late));
  out.require(mfit.max_abs_residual < 0.01, fmt("monitored fit residual %.3g", mfit.max_abs_residual));
  if (out.pass)
    out.detail = fmt("deviation %.3f, revival %.4g", dev, peak_t) + fmt(" (P %.3f), monitored late %.3g", peak, late) +
                 fmt(", residual %.2g", mfit.max_abs_residual);
  return out;
}

Outcome born() {
  Outcome out;
  std::mt19937_64 rng(1010);
  const std::uint64_t runs = 100000;
  double worst_sigma = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    MeasurementChain chain;
    const oracle::Vec c = oracle::random_state(rng, n);
    chain.amplitudes.assign(c.data(), c.data() + c.size());
    chain.apparatus_dim = chain.environment_dim = chain.observer_dim = n;
    const auto rec = run_chain(chain, runs, 5000 + static_cast<std::uint64_t>(trial));
    for (std::size_t k = 0; k < n; ++k) {
      const double p = std::norm(chain.amplitudes[k]);
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(runs));
      const double z = std::abs(rec.frequency(k) - p) / sigma;
      worst_sigma = std::max(worst_sigma, z);
      out.require(z <= 3.0, fmt("trial %g outcome deviates by %.3g sigma", trial, z));
    }
  }

  const auto dir = std::filesystem::temp_directory_path() / "decolab_acceptance";
  std::filesystem::remove_all(dir);
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  const auto cfg = parse_config("[born-chain]\nseed = 42\namplitudes = 0.6, 0.8i\nruns = 100000\noutput = born.csv\n");
  const auto first = execute(cfg);
  const std::string csv = slurp(first.trace_path), report = slurp(first.report_path);
  const auto second = execute(cfg);
  ::unsetenv(kOutputDirEnv);
  out.require(!csv.empty() && slurp(second.trace_path) == csv && slurp(second.report_path) == report,
              "reruns differ");
  if (out.pass) out.detail = fmt("worst deviation %.2f sigma, reruns byte-identical", worst_sigma);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kinematics oracle equivalence", kinematics},
      {"Schmidt suite", schmidt_suite},
      {"recoherence by erasure", erasure},
      {"frozen-mass closed form", frozen_closed_form},
      {"moment oracle", moment_oracle},
      {"two-slit scaling", two_slit},
      {"chiral regimes", chiral},
      {"charge superselection", charge},
      {"decay and revival", decay},
      {"Born frequencies", born},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
