#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/kernels.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {
namespace {

using Index = Eigen::Index;

std::size_t step_count(double t_final, double dt) {
  return static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
}

double uniform_spacing(const DecayConfig& cfg) {
  if (cfg.mode_frequencies.empty()) return cfg.mode_spacing;
  const auto& w = cfg.mode_frequencies;
  if (w.size() < 2) return cfg.mode_spacing;
  const double dw = w[1] - w[0];
  for (std::size_t k = 1; k < w.size(); ++k)
    if (std::abs((w[k] - w[k - 1]) - dw) > 1e-9 * std::max(1.0, std::abs(dw))) return NAN;
  return dw;
}

void check_span(const DecayConfig& cfg) {
  if (cfg.n_modes < 2) return;
  const auto w = cfg.frequencies();
  const double span = *std::max_element(w.begin(), w.end()) - *std::min_element(w.begin(), w.end());
  const double linewidth = 2.0 * std::numbers::pi * cfg.coupling * cfg.coupling /
                           (span / static_cast<double>(cfg.n_modes - 1));
  if (span + span / static_cast<double>(cfg.n_modes - 1) < 10.0 * linewidth)
    throw PreconditionError("mode comb span " + std::to_string(span) +
                            " does not cover 10 coupling linewidths (" +
                            std::to_string(10.0 * linewidth) + ")");
}

DecayRun run_unmonitored(const DecayConfig& cfg) {
  const std::size_t n = cfg.n_modes;
  const auto w = cfg.frequencies();
  const Index dim = static_cast<Index>(n + 1);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = static_cast<Index>(k + 1);
    h(i, i) = w[k];
    h(0, i) = h(i, 0) = cfg.coupling;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  const Eigen::MatrixXd& q = solver.eigenvectors();
  const Eigen::VectorXd& e = solver.eigenvalues();
  const Eigen::VectorXd a = q.row(0).transpose();  // Q† |excited>

  const std::size_t steps = step_count(cfg.final_time(), cfg.dt);
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);
  DecayRun run{ObservableTrace({"survival", "norm"}), 0.0, 0.0, 0.0};
  Vector coeff(dim);
  for (std::size_t step = 0; step <= steps; ++step) {
    if (step % stride != 0 && step != steps) continue;
    const double t = static_cast<double>(step) * cfg.dt;
    for (Index j = 0; j < dim; ++j) coeff(j) = a(j) * std::polar(1.0, -e(j) * t);
    const Vector psi = q.cast<cplx>() * coeff;
    const double norm = psi.squaredNorm();
    run.norm_drift = std::max(run.norm_drift, std::abs(norm - 1.0));
    run.trace.add(t, {std::norm(psi(0)), norm});
  }
  run.min_eigenvalue = 0.0;
  return run;
}

DecayRun run_monitored(const DecayConfig& cfg) {
  const std::size_t n = cfg.n_modes;
  const auto w = cfg.frequencies();
  const Index dim = static_cast<Index>(n + 1);
  const double dt = cfg.dt;

  // Half step: free phases of H0 and excited/decayed dephasing (they commute).
  Vector phase(dim);
  phase(0) = 1.0;
  for (std::size_t k = 0; k < n; ++k) phase(static_cast<Index>(k + 1)) = std::polar(1.0, -w[k] * dt / 2.0);
  Matrix half = phase * phase.adjoint();
  std::vector<int> sector(n + 1, 1);
  sector[0] = 0;
  kernels::dephase_sectors(half, sector, std::exp(-cfg.monitor_rate * dt / 2.0));

  // Full step: the coupling is a rotation in span{|e>, |b>}, b the uniform
  // mode superposition, with Rabi frequency g √n. With W = [e, b] and
  // M = exp(-iV dt) - 1 on that span, ρ += W M W†ρ + ρ W M† W† + W M W†ρW M† W†.
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double rabi = cfg.coupling * std::sqrt(static_cast<double>(n));
  const cplx c = std::cos(rabi * dt) - 1.0;
  const cplx s = cplx(0.0, -std::sin(rabi * dt));
  Eigen::Matrix2cd rot;
  rot << c, s, s, c;
  const Eigen::Matrix2cd rot_adj = rot.adjoint();

  auto rotate = [&](Matrix& rho) {
    Eigen::Matrix<cplx, 2, Eigen::Dynamic> left(2, dim);  // W† ρ
    left.row(0) = rho.row(0);
    left.row(1) = rho.bottomRows(dim - 1).colwise().sum() * inv_sqrt_n;
    Eigen::Matrix<cplx, Eigen::Dynamic, 2> right(dim, 2);  // ρ W
    right.col(0) = rho.col(0);
    right.col(1) = rho.rightCols(dim - 1).rowwise().sum() * inv_sqrt_n;
    Eigen::Matrix2cd inner;
    inner.col(0) = left.col(0);
    inner.col(1) = left.rightCols(dim - 1).rowwise().sum() * inv_sqrt_n;
    const Eigen::Matrix<cplx, 2, Eigen::Dynamic> a = rot * left;
    const Eigen::Matrix<cplx, Eigen::Dynamic, 2> b = right * rot_adj;
    const Eigen::Matrix2cd m = rot * inner * rot_adj;
    const double wt[2] = {1.0, inv_sqrt_n};
    for (Index j = 0; j < dim; ++j) {
      const int sj = j == 0 ? 0 : 1;
      for (Index i = 0; i < dim; ++i) {
        const int si = i == 0 ? 0 : 1;
        rho(i, j) += a(si, j) * wt[si] + b(i, sj) * wt[sj] + m(si, sj) * (wt[si] * wt[sj]);
      }
    }
  };

  Matrix rho = Matrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  const std::size_t steps = step_count(cfg.final_time(), dt);
  const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);
  DecayRun run{ObservableTrace({"survival", "trace", "coherence"}), 0.0, 0.0, 0.0};
  auto record = [&](std::size_t step) {
    const double tr = rho.trace().real();
    run.norm_drift = std::max(run.norm_drift, std::abs(tr - 1.0));
    run.hermiticity_error = std::max(run.hermiticity_error, hermiticity_error(rho));
    run.trace.add(static_cast<double>(step) * dt,
                  {rho(0, 0).real(), tr, rho.row(0).tail(dim - 1).cwiseAbs().sum()});
  };
  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    rho.array() *= half.array();
    rotate(rho);
    rho.array() *= half.array();
    if (step % stride == 0 || step == steps) record(step);
  }
  run.min_eigenvalue = min_eigenvalue(rho);
  return run;
}

}  // namespace

void DecayConfig::validate() const {
  if (n_modes < 1) throw PreconditionError("n_modes must be ≥ 1");
  if (!(mode_spacing > 0.0)) throw PreconditionError("mode_spacing must be positive");
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) throw PreconditionError("coupling must be ≥ 0");
  if (!std::isfinite(detuning)) throw PreconditionError("detuning must be finite");
  if (!mode_frequencies.empty() && mode_frequencies.size() != n_modes)
    throw DimensionError("mode_frequencies must list n_modes values");
  if (!(monitor_rate >= 0.0) || !std::isfinite(monitor_rate))
    throw PreconditionError("monitor_rate must be ≥ 0");
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw PreconditionError("t_final ≥ 0 and dt > 0 required");
}

double DecayConfig::final_time() const {
  return t_final > 0.0 ? t_final : 1.5 * 2.0 * std::numbers::pi / mode_spacing;
}

std::vector<double> DecayConfig::frequencies() const {
  if (!mode_frequencies.empty()) return mode_frequencies;
  std::vector<double> w(n_modes);
  const double mid = (static_cast<double>(n_modes) - 1.0) / 2.0;
  for (std::size_t k = 0; k < n_modes; ++k)
    w[k] = (static_cast<double>(k) - mid) * mode_spacing + detuning;
  return w;
}

double golden_rule_rate(const DecayConfig& cfg) {
  cfg.validate();
  return 2.0 * std::numbers::pi * cfg.coupling * cfg.coupling / cfg.mode_spacing;
}

double monitored_rate(const DecayConfig& cfg) {
  cfg.validate();
  const double gd = cfg.monitor_rate;
  double rate = 0.0;
  for (double w : cfg.frequencies())
    rate += 2.0 * cfg.coupling * cfg.coupling * gd / (gd * gd + w * w);
  return rate;
}

DecayRun run_decay(const DecayConfig& cfg) {
  cfg.validate();
  check_span(cfg);
  return cfg.monitored ? run_monitored(cfg) : run_unmonitored(cfg);
}

ObservableTrace decay_survival(const DecayConfig& cfg) { return run_decay(cfg).trace; }

std::optional<double> revival_time(const DecayConfig& cfg) {
  cfg.validate();
  if (cfg.monitored) return std::nullopt;
  const double dw = uniform_spacing(cfg);
  if (!std::isfinite(dw) || !(dw > 0.0)) return std::nullopt;
  return 2.0 * std::numbers::pi / dw;
}

}  // namespace decolab
