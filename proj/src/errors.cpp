#include "decolab/errors.hpp"

#include <sstream>

namespace decolab {
namespace {

std::string describe(const std::string& invariant, double magnitude,
                     std::optional<std::size_t> step) {
  std::ostringstream os;
  os.precision(17);
  os << "invariant violated: " << invariant << " (magnitude " << magnitude << ")";
  if (step) os << " at step " << *step;
  return os.str();
}

std::string with_line(const std::string& message, std::size_t line) {
  if (line == 0) return message;
  return "line " + std::to_string(line) + ": " + message;
}

}  // namespace

InvariantError::InvariantError(std::string invariant, double magnitude,
                               std::optional<std::size_t> step)
    : Error(describe(invariant, magnitude, step)),
      invariant_(std::move(invariant)),
      magnitude_(magnitude),
      step_(step) {}

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : Error(with_line(message, line)), line_(line) {}

SchemaError::SchemaError(const std::string& message, std::string column)
    : Error(message), column_(std::move(column)) {}

}  // namespace decolab
