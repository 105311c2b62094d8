#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace decolab {

/// Time series of named real observables, one row per recorded time.
class ObservableTrace {
 public:
  ObservableTrace() = default;
  explicit ObservableTrace(std::vector<std::string> columns);

  /// Appends a row; times must be strictly increasing and `values` must have
  /// one entry per column.
  void add(double time, std::vector<double> values);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  bool has_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  double value(std::size_t row, const std::string& name) const;
  const std::vector<double>& row(std::size_t r) const { return rows_.at(r); }

 private:
  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

struct ExponentialFit {
  double rate = 0.0;       // fitted decay rate, y ≈ A exp(-rate t)
  double log_amplitude = 0.0;
  double max_log_residual = 0.0;
  double max_abs_residual = 0.0;  // max |y - A exp(-rate t)|
  std::size_t points = 0;
};

/// Least squares on ln y over t in [t_begin, t_end], skipping y <= floor.
/// With `through_unit_origin` the amplitude is pinned to A = 1.
ExponentialFit fit_exponential(const std::vector<double>& t,
                               const std::vector<double>& y, double t_begin,
                               double t_end, bool through_unit_origin = false,
                               double floor = 1e-300);

/// First time the series crosses `level` (either direction), linearly
/// interpolated; NaN when it never does.
double first_crossing(const std::vector<double>& t, const std::vector<double>& y,
                      double level);

}  // namespace decolab
