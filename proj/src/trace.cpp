#include "decolab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decolab/errors.hpp"

namespace decolab {

ObservableTrace::ObservableTrace(std::vector<std::string> columns) : columns_(std::move(columns)) {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    for (std::size_t j = i + 1; j < columns_.size(); ++j)
      if (columns_[i] == columns_[j]) throw DimensionError("duplicate trace column " + columns_[i]);
}

void ObservableTrace::add(double time, std::vector<double> values) {
  if (values.size() != columns_.size())
    throw DimensionError("trace row has " + std::to_string(values.size()) + " values for " +
                         std::to_string(columns_.size()) + " columns");
  if (!times_.empty() && !(time > times_.back()))
    throw InvariantError("trace times strictly increasing", time - times_.back());
  times_.push_back(time);
  rows_.push_back(std::move(values));
}

bool ObservableTrace::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::size_t ObservableTrace::column_index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw DimensionError("no trace column named " + name);
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> ObservableTrace::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

double ObservableTrace::value(std::size_t row, const std::string& name) const {
  return rows_.at(row)[column_index(name)];
}

ExponentialFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                               double t_begin, double t_end, bool through_unit_origin,
                               double floor) {
  if (t.size() != y.size()) throw DimensionError("fit needs matching t and y");
  std::vector<double> ts, ls, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin || t[i] > t_end || !(y[i] > floor) || !std::isfinite(y[i])) continue;
    ts.push_back(t[i]);
    ls.push_back(std::log(y[i]));
    ys.push_back(y[i]);
  }
  ExponentialFit fit;
  fit.points = ts.size();
  if (ts.size() < 2) return fit;

  if (through_unit_origin) {
    double stt = 0.0, stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      stt += ts[i] * ts[i];
      stl += ts[i] * ls[i];
    }
    fit.rate = stt > 0.0 ? -stl / stt : 0.0;
    fit.log_amplitude = 0.0;
  } else {
    const double n = static_cast<double>(ts.size());
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      st += ts[i];
      sl += ls[i];
      stt += ts[i] * ts[i];
      stl += ts[i] * ls[i];
    }
    const double denom = n * stt - st * st;
    const double slope = denom != 0.0 ? (n * stl - st * sl) / denom : 0.0;
    fit.rate = -slope;
    fit.log_amplitude = (sl - slope * st) / n;
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double model = fit.log_amplitude - fit.rate * ts[i];
    fit.max_log_residual = std::max(fit.max_log_residual, std::abs(ls[i] - model));
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(ys[i] - std::exp(model)));
  }
  return fit;
}

double first_crossing(const std::vector<double>& t, const std::vector<double>& y, double level) {
  for (std::size_t i = 1; i < t.size() && i < y.size(); ++i) {
    const double a = y[i - 1] - level;
    const double b = y[i] - level;
    if (a == 0.0) return t[i - 1];
    if ((a < 0.0) != (b < 0.0) || b == 0.0) return t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace decolab
