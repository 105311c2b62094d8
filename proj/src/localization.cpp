#include "decolab/localization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/hilbert.hpp"

namespace decolab {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double inverse_mass(double mass) { return std::isinf(mass) ? 0.0 : 1.0 / mass; }

std::vector<cplx> kinetic_phases(const GridSpec& grid, double mass, double dt) {
  const auto k = grid.wavenumbers();
  std::vector<cplx> phase(k.size());
  const double scale = dt * inverse_mass(mass) / 4.0;
  for (std::size_t j = 0; j < k.size(); ++j) phase[j] = std::polar(1.0, -k[j] * k[j] * scale);
  return phase;
}

double trace_of(const Matrix& rho, double dx) { return rho.diagonal().real().sum() * dx; }

double edge_density_of(const Matrix& rho, double dx, double fraction) {
  const auto n = static_cast<std::size_t>(rho.rows());
  const std::size_t m =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction)));
  double sum = 0.0;
  for (std::size_t i = 0; i < m && i < n; ++i) {
    sum += rho(idx(i), idx(i)).real();
    sum += rho(idx(n - 1 - i), idx(n - 1 - i)).real();
  }
  return sum * dx;
}

GaussianMoments moments_of(const Matrix& rho, const GridSpec& grid,
                           const kernels::SpectralConjugator& fft) {
  const std::size_t n = grid.size();
  const auto k = grid.wavenumbers();
  const double tr = rho.diagonal().real().sum();

  GaussianMoments m;
  for (std::size_t i = 0; i < n; ++i) m.mean_x += grid.x(i) * rho(idx(i), idx(i)).real();
  m.mean_x /= tr;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = grid.x(i) - m.mean_x;
    m.var_xx += d * d * rho(idx(i), idx(i)).real();
  }
  m.var_xx /= tr;

  // Momentum distribution: diagonal of F ρ F†.
  Matrix a = rho;
  fft.transform_columns(a, -1);
  fft.transform_rows(a, +1);
  double pk_sum = 0.0, p1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = a(idx(j), idx(j)).real();
    pk_sum += w;
    p1 += k[j] * w;
  }
  m.mean_p = p1 / pk_sum;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = k[j] - m.mean_p;
    m.var_pp += d * d * a(idx(j), idx(j)).real();
  }
  m.var_pp /= pk_sum;

  // <xp> = Tr(ρ x p) = Σ_i x_i (p ρ)_ii; its real part is the symmetrised <(xp+px)/2>.
  Matrix b = rho;
  fft.transform_columns(b, -1);
  for (std::size_t j = 0; j < n; ++j) b.row(idx(j)) *= k[j] / static_cast<double>(n);
  fft.transform_columns(b, +1);
  cplx xp{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) xp += grid.x(i) * b(idx(i), idx(i));
  m.cov_xp = xp.real() / tr - m.mean_x * m.mean_p;
  return m;
}

}  // namespace

// ------------------------------------------------------------------- GridSpec

GridSpec::GridSpec(std::size_t n_points, double x_min, double x_max)
    : n_(n_points), x_min_(x_min), x_max_(x_max) {
  if (n_points < 16 || !is_power_of_two(n_points))
    throw PreconditionError("grid size must be a power of two ≥ 16, got " + std::to_string(n_points));
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw PreconditionError("grid bounds must satisfy x_max > x_min");
}

std::vector<double> GridSpec::positions() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = this->x(i);
  return x;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> k(n_);
  const double base = 2.0 * std::numbers::pi / width();
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    auto s = static_cast<std::ptrdiff_t>(j);
    if (s >= half) s -= static_cast<std::ptrdiff_t>(n_);
    k[j] = base * static_cast<double>(s);
  }
  return k;
}

std::size_t GridSpec::nearest_index(double x) const {
  const double r = std::round((x - x_min_) / dx());
  if (r <= 0.0) return 0;
  return std::min(n_ - 1, static_cast<std::size_t>(r));
}

// --------------------------------------------------------- GridDensityMatrix

GridDensityMatrix::GridDensityMatrix(GridSpec grid, Matrix rho, double mass, double lambda)
    : grid_(grid), rho_(std::move(rho)), mass_(mass), lambda_(lambda) {
  if (static_cast<std::size_t>(rho_.rows()) != grid_.size() || rho_.rows() != rho_.cols())
    throw DimensionError("grid density matrix must be " + std::to_string(grid_.size()) + " square");
  if (!(mass > 0.0)) throw PreconditionError("mass must satisfy m > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw PreconditionError("localization rate must satisfy lambda ≥ 0");
  const double herm = decolab::hermiticity_error(rho_);
  if (herm > 1e-10) throw InvariantError("grid density matrix hermitian", herm);
  const double tr = std::abs(trace() - 1.0);
  if (tr > 1e-8) throw InvariantError("grid density matrix trace = 1", tr);
}

GridDensityMatrix GridDensityMatrix::pure(GridSpec grid, const Vector& psi, double mass,
                                          double lambda) {
  if (static_cast<std::size_t>(psi.size()) != grid.size())
    throw DimensionError("wavefunction length does not match the grid");
  const double norm = std::sqrt(psi.squaredNorm() * grid.dx());
  if (!(norm > 0.0)) throw InvariantError("nonzero wavefunction", norm);
  const Vector v = psi / norm;
  return GridDensityMatrix(grid, v * v.adjoint(), mass, lambda);
}

bool GridDensityMatrix::kinetic_frozen() const noexcept { return std::isinf(mass_); }

double GridDensityMatrix::trace() const { return trace_of(rho_, grid_.dx()); }

double GridDensityMatrix::hermiticity_error() const { return decolab::hermiticity_error(rho_); }

double GridDensityMatrix::min_eigenvalue() const {
  return decolab::min_eigenvalue(rho_ * grid_.dx());
}

double GridDensityMatrix::purity() const { return rho_.squaredNorm() * grid_.dx() * grid_.dx(); }

double GridDensityMatrix::edge_density(double fraction) const {
  return edge_density_of(rho_, grid_.dx(), fraction);
}

GridDensityMatrix GridDensityMatrix::with_rho(Matrix rho) const {
  return GridDensityMatrix(grid_, std::move(rho), mass_, lambda_);
}

// ------------------------------------------------------------------ utilities

Vector gaussian_packet(const GridSpec& grid, double center, double sigma, double momentum) {
  if (!(sigma > 0.0)) throw PreconditionError("packet width must be positive");
  Vector psi(idx(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - center;
    psi(idx(i)) = std::exp(-d * d / (4.0 * sigma * sigma)) * std::polar(1.0, momentum * grid.x(i));
  }
  return psi / std::sqrt(psi.squaredNorm() * grid.dx());
}

bool GaussianMoments::valid(double tolerance) const {
  return var_xx > 0.0 && var_pp > 0.0 && var_xx * var_pp - cov_xp * cov_xp >= 0.25 - tolerance;
}

GaussianMoments moments(const GridDensityMatrix& s) {
  kernels::SpectralConjugator fft(s.grid().size());
  return moments_of(s.rho(), s.grid(), fft);
}

GaussianMoments moment_ode_oracle(const GaussianMoments& initial, double mass, double lambda,
                                  double t) {
  if (!(t >= 0.0)) throw PreconditionError("oracle time must satisfy t ≥ 0");
  using State = std::array<double, 5>;  // <x>, <p>, var_xx, cov_xp, var_pp
  const double im = inverse_mass(mass);
  auto rhs = [&](const State& y) {
    return State{y[1] * im, 0.0, 2.0 * y[3] * im, y[4] * im, 2.0 * lambda};
  };
  State y{initial.mean_x, initial.mean_p, initial.var_xx, initial.cov_xp, initial.var_pp};
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t / 1e-4)));
  const double h = t / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps && t > 0.0; ++s) {
    State k1 = rhs(y), k2, k3, k4, tmp;
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    k2 = rhs(tmp);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    k3 = rhs(tmp);
    for (int i = 0; i < 5; ++i) tmp[i] = y[i] + h * k3[i];
    k4 = rhs(tmp);
    for (int i = 0; i < 5; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return GaussianMoments{y[0], y[1], y[2], y[3], y[4]};
}

GridDensityMatrix localization_step(const GridDensityMatrix& s, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("time step must satisfy dt > 0");
  Matrix rho = s.rho();
  kernels::gaussian_damping(rho, s.grid().dx(), s.lambda() * dt);
  return s.with_rho(std::move(rho));
}

GridDensityMatrix kinetic_half_step(const GridDensityMatrix& s, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("time step must satisfy dt > 0");
  if (s.kinetic_frozen()) return s;
  kernels::SpectralConjugator fft(s.grid().size());
  Matrix rho = s.rho();
  fft.apply(rho, kinetic_phases(s.grid(), s.mass(), dt));
  return s.with_rho(std::move(rho));
}

CoherenceLength coherence_length(const GridDensityMatrix& s) {
  const Matrix& rho = s.rho();
  const std::size_t n = s.grid().size();
  const double dx = s.grid().dx();
  Index i0 = 0;
  rho.diagonal().real().maxCoeff(&i0);
  const double ref = std::abs(rho(i0, i0));
  if (!(ref > 0.0)) throw PreconditionError("coherence length needs a nonzero diagonal");

  const double target = -1.0;  // ln(1/e)
  double u_prev = 0.0, l_prev = 0.0;
  CoherenceLength out;
  const auto c = static_cast<std::size_t>(i0);
  for (std::size_t k = 1; c + k < n && c >= k; ++k) {
    const double u = 2.0 * static_cast<double>(k) * dx;
    const double r = std::abs(rho(idx(c + k), idx(c - k))) / ref;
    const double l = std::log(std::max(r, 1e-300));
    if (l <= target) {
      const double u2 = u_prev * u_prev + (target - l_prev) * (u * u - u_prev * u_prev) / (l - l_prev);
      out.length = std::sqrt(u2);
      out.below_resolution = (k == 1);
      return out;
    }
    u_prev = u;
    l_prev = l;
  }
  out.length = u_prev;
  out.beyond_grid = true;
  return out;
}

double recommended_max_dt(const GridDensityMatrix& s) {
  const double dx = s.grid().dx();
  const double l = s.grid().width();
  const double kinetic = s.kinetic_frozen() ? INFINITY : s.mass() * dx * dx;
  const double local = s.lambda() > 0.0 ? 1.0 / (s.lambda() * l * l) : INFINITY;
  return 0.1 * std::min(kinetic, local);
}

const std::vector<std::string>& builtin_grid_observables() {
  static const std::vector<std::string> names{
      "trace",  "purity", "hermiticity", "edge_density", "coherence_length", "offdiag_peak",
      "mean_x", "mean_p", "var_xx",      "cov_xp",       "var_pp"};
  return names;
}

Evolution evolve(const GridDensityMatrix& initial, double t_final, double dt,
                 const EvolveOptions& options) {
  if (!(dt > 0.0) || !(t_final > 0.0))
    throw PreconditionError("evolve needs dt > 0 and t_final > 0");
  const double ratio = t_final / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(static_cast<double>(steps) * dt - t_final) > 1e-9 * std::max(1.0, t_final))
    throw PreconditionError("dt must divide t_final (t_final / dt = " + std::to_string(ratio) + ")");
  for (const auto& name : options.record)
    if (std::find(builtin_grid_observables().begin(), builtin_grid_observables().end(), name) ==
        builtin_grid_observables().end())
      throw PreconditionError("unknown grid observable " + name);

  const GridSpec& grid = initial.grid();
  const double dx = grid.dx();
  const bool kinetic = !initial.kinetic_frozen();
  const kernels::SpectralConjugator fft(grid.size());
  const auto phases = kinetic_phases(grid, initial.mass(), dt);
  const double rate_dt = initial.lambda() * dt;
  const std::size_t stride = std::max<std::size_t>(1, options.record_stride);

  std::vector<std::string> columns = options.record;
  for (const auto& c : options.custom) columns.push_back(c.name);
  ObservableTrace trace(columns);

  auto record = [&](const Matrix& rho, std::size_t step) {
    std::optional<GaussianMoments> mom;
    std::vector<double> row;
    row.reserve(columns.size());
    const GridDensityMatrix snapshot = initial.with_rho(rho);
    for (const auto& name : options.record) {
      if (name == "trace") row.push_back(snapshot.trace());
      else if (name == "purity") row.push_back(snapshot.purity());
      else if (name == "hermiticity") row.push_back(snapshot.hermiticity_error());
      else if (name == "edge_density") row.push_back(snapshot.edge_density(options.edge_fraction));
      else if (name == "coherence_length") row.push_back(coherence_length(snapshot).length);
      else if (name == "offdiag_peak") {
        double peak = 0.0;
        for (Index j = 0; j < rho.cols(); ++j)
          for (Index i = 0; i < rho.rows(); ++i)
            if (i != j) peak = std::max(peak, std::abs(rho(i, j)));
        row.push_back(peak);
      } else {
        if (!mom) mom = moments_of(rho, grid, fft);
        if (name == "mean_x") row.push_back(mom->mean_x);
        else if (name == "mean_p") row.push_back(mom->mean_p);
        else if (name == "var_xx") row.push_back(mom->var_xx);
        else if (name == "cov_xp") row.push_back(mom->cov_xp);
        else row.push_back(mom->var_pp);
      }
    }
    for (const auto& c : options.custom) row.push_back(c.evaluate(snapshot));
    trace.add(static_cast<double>(step) * dt, std::move(row));
  };

  auto audit = [&](const Matrix& rho, std::size_t step, bool positivity) {
    const double drift = std::abs(trace_of(rho, dx) - 1.0);
    if (drift > options.trace_tolerance) throw InvariantError("trace conservation", drift, step);
    const double herm = decolab::hermiticity_error(rho);
    if (herm > options.hermiticity_tolerance) throw InvariantError("hermiticity", herm, step);
    const double edge = edge_density_of(rho, dx, options.edge_fraction);
    if (edge > options.edge_tolerance) throw InvariantError("edge density", edge, step);
    if (positivity) {
      const double lo = decolab::min_eigenvalue(rho * dx);
      if (lo < options.positivity_floor) throw InvariantError("positivity", lo, step);
    }
  };

  Matrix rho = initial.rho();
  audit(rho, 0, false);
  record(rho, 0);
  for (std::size_t step = 1; step <= steps; ++step) {
    if (kinetic) fft.apply(rho, phases);
    kernels::gaussian_damping(rho, dx, rate_dt);
    if (kinetic) fft.apply(rho, phases);
    const bool check_positivity =
        step == steps || (options.positivity_stride > 0 && step % options.positivity_stride == 0);
    audit(rho, step, check_positivity);
    if (step % stride == 0 || step == steps) record(rho, step);
  }
  return Evolution{initial.with_rho(std::move(rho)), std::move(trace)};
}

}  // namespace decolab
