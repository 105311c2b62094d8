#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {

void ChiralConfig::validate() const {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw PreconditionError("omega must satisfy omega ≥ 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw PreconditionError("gamma must satisfy gamma ≥ 0");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw PreconditionError("t_final and dt must be positive");
  const double limit = 0.05 / std::max({omega, gamma, 1e-30});
  if (dt > limit)
    throw PreconditionError("step size dt = " + std::to_string(dt) +
                            " violates dt ≤ 0.05 / max(omega, gamma) = " + std::to_string(limit));
  if (initial && initial->size() != 2)
    throw DimensionError("chiral initial state must have two components");
}

ChiralRun run_chiral(const ChiralConfig& cfg) {
  cfg.validate();
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));
  if (steps == 0 || std::abs(static_cast<double>(steps) * cfg.dt - cfg.t_final) >
                        1e-9 * std::max(1.0, cfg.t_final))
    throw PreconditionError("dt must divide t_final");

  Vector psi(2);
  psi << 1.0, 0.0;
  if (cfg.initial) psi = *cfg.initial;
  DensityMatrix rho = density_of(StateVector(psi));

  const double c = std::cos(cfg.omega * cfg.dt / 2.0);
  const double s = std::sin(cfg.omega * cfg.dt / 2.0);
  Matrix u(2, 2);
  u << c, cplx(0.0, -s), cplx(0.0, -s), c;
  Matrix hadamard(2, 2);
  hadamard << 1.0, 1.0, 1.0, -1.0;
  hadamard /= std::numbers::sqrt2;
  const MonitoringChannel half{kChiralChannelRatePerGamma * cfg.gamma, {0, 1}, cfg.dt / 2.0};
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);

  ObservableTrace trace({"P_L", "coherence", "parity_coherence", "purity", "trace"});
  auto record = [&](std::size_t step) {
    const Matrix& m = rho.entries();
    const Matrix parity = hadamard * m * hadamard;
    trace.add(static_cast<double>(step) * cfg.dt,
              {m(0, 0).real(), std::abs(m(0, 1)), std::abs(parity(0, 1)), purity(rho),
               m.trace().real()});
  };
  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    rho = monitor_step(rho, half);
    Matrix next = u * rho.entries() * u.adjoint();
    // Strip rounding drift so long runs stay within the 1e-12 trace check.
    next = (next + next.adjoint().eval()) / (next.trace().real() * 2.0);
    rho = DensityMatrix(std::move(next), rho.split());
    rho = monitor_step(rho, half);
    if (step % stride == 0 || step == steps) record(step);
  }
  return ChiralRun{std::move(trace), std::move(rho)};
}

ObservableTrace chiral_dynamics(const ChiralConfig& cfg) { return run_chiral(cfg).trace; }

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::unitary: return "unitary";
    case Regime::master: return "master";
    case Regime::zeno: return "zeno";
  }
  return "unknown";
}

Regime classify_regime(const ChiralConfig& cfg, const RegimeThresholds& thresholds) {
  if (cfg.gamma <= 0.0) return Regime::unitary;
  if (cfg.omega <= 0.0) return Regime::zeno;
  if (cfg.gamma < thresholds.unitary_below * cfg.omega) return Regime::unitary;
  if (cfg.gamma > thresholds.zeno_above * cfg.omega) return Regime::zeno;
  return Regime::master;
}

double chiral_relaxation_rate(const ObservableTrace& trace, double t_begin, double t_end) {
  auto p = trace.column("P_L");
  for (double& v : p) v -= 0.5;
  return fit_exponential(trace.times(), p, t_begin, t_end).rate;
}

double chiral_relaxation_time(const ObservableTrace& trace, double level) {
  return first_crossing(trace.times(), trace.column("P_L"), level);
}

}  // namespace decolab
