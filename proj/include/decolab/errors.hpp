#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace decolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or out-of-range dimensions, factor indices and basis indices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a scenario or solver does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A kinematic invariant (trace, hermiticity, positivity, edge leakage) was
/// violated. Carries the invariant name, the offending magnitude and, for
/// time-stepping solvers, the step index.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, double magnitude,
                 std::optional<std::size_t> step = std::nullopt);

  const std::string& invariant() const noexcept { return invariant_; }
  double magnitude() const noexcept { return magnitude_; }
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  std::string invariant_;
  double magnitude_;
  std::optional<std::size_t> step_;
};

/// Malformed run configuration. `line` is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Trace files handed to summarize do not share a column layout.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string column);
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

}  // namespace decolab
