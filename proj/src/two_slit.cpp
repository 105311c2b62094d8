#include <cmath>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {

void TwoSlitConfig::validate() const {
  if (!(packet_width > 0.0)) throw PreconditionError("packet_width must be positive");
  if (!(separation > 2.0 * packet_width))
    throw PreconditionError("slit separation must exceed 2 packet widths");
  if (!(mass > 0.0)) throw PreconditionError("mass must satisfy m > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw PreconditionError("lambda must satisfy lambda ≥ 0");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw PreconditionError("t_final and dt must be positive");
  if (!(grid_extent >= 0.0)) throw PreconditionError("grid_extent must be ≥ 0");
  if (grid_extent > 0.0 && grid_extent < separation + 12.0 * packet_width)
    throw PreconditionError("grid_extent must leave 6 packet widths of margin on each side");
}

TwoSlitRun run_two_slit(const TwoSlitConfig& cfg) {
  cfg.validate();
  const double extent =
      cfg.grid_extent > 0.0 ? cfg.grid_extent : cfg.separation + 24.0 * cfg.packet_width;
  const GridSpec grid(cfg.grid_points, -extent / 2.0, extent / 2.0);
  if (grid.dx() > cfg.packet_width / 2.0)
    throw PreconditionError("grid resolution dx = " + std::to_string(grid.dx()) +
                            " does not resolve packet width " + std::to_string(cfg.packet_width));

  const std::size_t ip = grid.nearest_index(cfg.separation / 2.0);
  const std::size_t im = grid.nearest_index(-cfg.separation / 2.0);
  const double xp = grid.x(ip);
  const double xm = grid.x(im);
  const Vector psi =
      gaussian_packet(grid, xp, cfg.packet_width) + gaussian_packet(grid, xm, cfg.packet_width);
  const GridDensityMatrix initial = GridDensityMatrix::pure(grid, psi, cfg.mass, cfg.lambda);

  const auto a = static_cast<Eigen::Index>(ip);
  const auto b = static_cast<Eigen::Index>(im);
  const double cross0 = std::abs(initial.rho()(a, b));
  EvolveOptions options;
  options.record = {"trace"};
  options.record_stride = cfg.record_stride;
  options.custom = {
      {"visibility",
       [a, b](const GridDensityMatrix& s) {
         const Matrix& r = s.rho();
         return std::abs(r(a, b)) / std::sqrt(r(a, a).real() * r(b, b).real());
       }},
      {"cross_peak_ratio",
       [a, b, cross0](const GridDensityMatrix& s) { return std::abs(s.rho()(a, b)) / cross0; }},
  };
  Evolution ev = evolve(initial, cfg.t_final, cfg.dt, options);

  const double d = xp - xm;
  ObservableTrace trace({"visibility", "cross_peak_ratio", "closed_form", "trace"});
  for (std::size_t r = 0; r < ev.trace.size(); ++r) {
    const double t = ev.trace.times()[r];
    trace.add(t, {ev.trace.value(r, "visibility"), ev.trace.value(r, "cross_peak_ratio"),
                  std::exp(-cfg.lambda * d * d * t), ev.trace.value(r, "trace")});
  }
  return TwoSlitRun{std::move(trace), std::move(ev.state), d};
}

ObservableTrace two_slit_visibility(const TwoSlitConfig& cfg) { return run_two_slit(cfg).trace; }

}  // namespace decolab
