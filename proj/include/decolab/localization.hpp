#pragma once

// Position-space density matrix ρ(x, x') of a free mass point under
//
//   i ∂ρ/∂t = (1/2m)(∂²/∂x'² − ∂²/∂x²) ρ − iΛ (x − x')² ρ ,   ħ = 1,
//
// on a uniform periodic grid. The kinetic part is applied spectrally, the
// localization part through its exact flow exp(−Λ (x − x')² t), combined by
// Strang splitting.

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "decolab/kernels.hpp"
#include "decolab/trace.hpp"
#include "decolab/types.hpp"

namespace decolab {

class GridSpec {
 public:
  /// n_points must be a power of two >= 16 and x_max > x_min. The grid is
  /// periodic: x_i = x_min + i dx with dx = (x_max - x_min) / n_points.
  GridSpec(std::size_t n_points, double x_min, double x_max);

  std::size_t size() const noexcept { return n_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double dx() const noexcept { return width() / static_cast<double>(n_); }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx(); }
  std::vector<double> positions() const;
  /// FFT-ordered wavenumbers 2π j / L, j wrapped to [-n/2, n/2).
  std::vector<double> wavenumbers() const;
  std::size_t nearest_index(double x) const;

 private:
  std::size_t n_;
  double x_min_;
  double x_max_;
};

class GridDensityMatrix {
 public:
  /// Mass value selecting the frozen-kinetics (m = ∞) mode.
  static constexpr double kFrozenMass = std::numeric_limits<double>::infinity();

  /// Validates hermiticity (1e-10) and Σ ρ_ii dx = 1 (1e-8); m > 0, Λ >= 0.
  GridDensityMatrix(GridSpec grid, Matrix rho, double mass, double lambda);

  /// |ψ><ψ| after normalising ψ so that Σ |ψ_i|² dx = 1.
  static GridDensityMatrix pure(GridSpec grid, const Vector& psi, double mass,
                                double lambda);

  const GridSpec& grid() const noexcept { return grid_; }
  const Matrix& rho() const noexcept { return rho_; }
  double mass() const noexcept { return mass_; }
  double lambda() const noexcept { return lambda_; }
  bool kinetic_frozen() const noexcept;

  /// Σ ρ_ii dx
  double trace() const;
  double hermiticity_error() const;
  /// Smallest eigenvalue of ρ dx.
  double min_eigenvalue() const;
  /// Tr (ρ dx)²
  double purity() const;
  /// Probability Σ ρ_ii dx over the outer `fraction` of the grid on each side
  /// (at least one point per side).
  double edge_density(double fraction = 1.0 / 16.0) const;

  GridDensityMatrix with_rho(Matrix rho) const;

 private:
  GridSpec grid_;
  Matrix rho_;
  double mass_;
  double lambda_;
};

/// ψ(x) ∝ exp(-(x - x0)² / (4σ²) + i p0 x), normalised on the grid. σ is the
/// position standard deviation.
Vector gaussian_packet(const GridSpec& grid, double center, double sigma,
                       double momentum = 0.0);

struct GaussianMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_xx = 0.0;
  double cov_xp = 0.0;  // <(xp + px)/2> - <x><p>
  double var_pp = 0.0;

  /// var_xx > 0, var_pp > 0, var_xx var_pp - cov_xp² >= 1/4 - tolerance.
  bool valid(double tolerance = 1e-9) const;
};

/// First and second moments of x and p = -i d/dx (spectral), normalised by
/// the trace.
GaussianMoments moments(const GridDensityMatrix& s);

/// Closed moment system of the master equation, integrated with fixed-step
/// RK4 (at most 1e-4 per step):
///   d<x>/dt = <p>/m, d<p>/dt = 0, d var_xx/dt = 2 cov_xp / m,
///   d cov_xp/dt = var_pp / m, d var_pp/dt = 2Λ.
/// m = ∞ is accepted and freezes the position moments.
GaussianMoments moment_ode_oracle(const GaussianMoments& initial, double mass,
                                  double lambda, double t);

/// One localization flow of duration dt: ρ_ij *= exp(−Λ (x_i − x_j)² dt).
GridDensityMatrix localization_step(const GridDensityMatrix& s, double dt);

/// e^{−iH dt/2} ρ e^{+iH dt/2}, H = p²/2m; identity in the frozen mode.
GridDensityMatrix kinetic_half_step(const GridDensityMatrix& s, double dt);

struct CoherenceLength {
  double length = 0.0;
  bool below_resolution = false;  // 1/e reached before u = 2 dx
  bool beyond_grid = false;       // 1/e never reached on the grid
};

/// Value of u at which |ρ(x0 + u/2, x0 − u/2)| falls to 1/e of its u = 0
/// value, x0 the diagonal maximum; u runs over even grid offsets and the
/// crossing is interpolated linearly in u² of ln|ρ|.
CoherenceLength coherence_length(const GridDensityMatrix& s);

/// 0.1 min(m dx², 1/(Λ L²)); advisory only, evolve() does not enforce it.
double recommended_max_dt(const GridDensityMatrix& s);

struct NamedObservable {
  std::string name;
  std::function<double(const GridDensityMatrix&)> evaluate;
};

struct EvolveOptions {
  /// Built-in observables: trace, purity, hermiticity, edge_density,
  /// coherence_length, offdiag_peak, mean_x, mean_p, var_xx, cov_xp, var_pp.
  std::vector<std::string> record{"trace"};
  std::vector<NamedObservable> custom;
  std::size_t record_stride = 1;
  double trace_tolerance = 1e-8;
  double hermiticity_tolerance = 1e-10;
  double edge_tolerance = 1e-8;
  double edge_fraction = 1.0 / 16.0;
  /// Check min eigenvalue of ρ dx every this many steps (0: final state only).
  std::size_t positivity_stride = 0;
  double positivity_floor = -1e-8;
};

struct Evolution {
  GridDensityMatrix state;
  ObservableTrace trace;
};

/// Strang steps (kinetic half, localization, kinetic half) from 0 to
/// t_final. Throws PreconditionError when dt does not divide t_final and
/// InvariantError, with the step index, when trace, hermiticity, edge density
/// or positivity leave their bounds.
Evolution evolve(const GridDensityMatrix& initial, double t_final, double dt,
                 const EvolveOptions& options = {});

/// Names accepted in EvolveOptions::record.
const std::vector<std::string>& builtin_grid_observables();

}  // namespace decolab
