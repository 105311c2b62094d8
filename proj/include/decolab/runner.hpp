#pragma once

// Batch execution: config parsing, the scenario registry, CSV traces, run
// reports and cross-run summaries.
//
// Config format (UTF-8, line oriented):
//
//   # comment
//   [two-slit]            <- one section per run, named by scenario
//   seed = 42
//   output = two_slit.csv
//   record_stride = 10
//   lambda = 0.05
//   mass = inf
//   amplitudes = 0.6, 0.8i, -0.1+0.2i
//
// Unknown keys, missing required keys and out-of-bounds values are rejected
// with the offending line number.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "decolab/trace.hpp"
#include "decolab/types.hpp"

namespace decolab {

using ComplexList = std::vector<cplx>;
using ParamValue = std::variant<double, std::int64_t, ComplexList>;

enum class ParamKind { real, integer, complex_list };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::real;
  std::optional<ParamValue> default_value;  // nullopt: required
  std::optional<double> lower;
  bool lower_inclusive = true;
  std::optional<double> upper;
  bool upper_inclusive = true;
  bool allow_infinity = false;
  std::string description;

  /// Human-readable constraint, e.g. "lambda ≥ 0".
  std::string constraint() const;
};

struct RunConfig {
  std::string scenario;
  std::map<std::string, ParamValue> parameters;
  std::uint64_t seed = 0;
  std::string output_path;
  std::size_t record_stride = 1;

  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  const ComplexList& complex_list(const std::string& key) const;

  bool operator==(const RunConfig&) const = default;
};

struct InvariantAudit {
  double trace_drift = 0.0;
  double hermiticity_drift = 0.0;
  double min_eigenvalue = 0.0;

  static constexpr double kTraceLimit = 1e-8;
  static constexpr double kHermiticityLimit = 1e-10;
  static constexpr double kEigenvalueFloor = -1e-8;
  /// Throws InvariantError naming the first violated bound.
  void enforce() const;
};

struct ScenarioResult {
  ObservableTrace trace;
  InvariantAudit audit;
  /// Ordered summary quantities (fitted exponents, half-lives, labels).
  std::vector<std::pair<std::string, std::string>> summary;
  std::string fit_column;
  double fit_begin = 0.0;
  double fit_end = 0.0;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> parameters;
  std::function<ScenarioResult(const RunConfig&)> run;
};

/// All registered scenarios, in listing order.
const std::vector<ScenarioInfo>& scenario_registry();
const ScenarioInfo& find_scenario(std::string_view name);  // throws ConfigError

/// Every [section] of the document.
std::vector<RunConfig> parse_configs(std::string_view text);
/// Exactly one [section]; throws ConfigError otherwise.
RunConfig parse_config(std::string_view text);
/// Inverse of parse_config: parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

struct RunReport {
  RunConfig config;
  std::chrono::duration<double> wall_time{0};
  InvariantAudit audit;
  std::vector<std::pair<std::string, std::string>> summary;
  std::string fit_column;
  double fit_begin = 0.0;
  double fit_end = 0.0;
  std::filesystem::path trace_path;
  std::filesystem::path report_path;

  /// JSON document written next to the trace. Wall time is excluded so the
  /// bytes depend only on (config, seed).
  std::string to_json() const;
};

/// Environment variable that redirects every output file into a directory.
inline constexpr const char* kOutputDirEnv = "DECOLAB_OUTPUT_DIR";

std::filesystem::path resolve_output_path(const RunConfig& cfg);
/// "<trace stem>.report.json" beside the trace.
std::filesystem::path report_path_for(const std::filesystem::path& trace_path);

/// Runs the scenario, audits invariants, writes the CSV trace and the JSON
/// report. Scenario errors propagate with the config echoed in the message.
RunReport execute(const RunConfig& cfg);

/// Full-precision decimal (17 significant digits); "inf"/"-inf"/"nan".
std::string format_real(double value);
std::string format_csv(const ObservableTrace& trace);
ObservableTrace parse_csv(std::string_view text);
ObservableTrace read_csv(const std::filesystem::path& path);

struct SummaryTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool empty() const noexcept { return rows.empty(); }
  std::string format() const;
};

/// One row per trace: fitted exponent of the fit column (from the report
/// sidecar when present, else the first data column), residual, ratio to the
/// first trace's exponent and the report's label. Empty input gives an empty
/// table; traces with different headers raise SchemaError.
SummaryTable summarize(const std::vector<std::filesystem::path>& traces);

/// Exit codes of the CLI.
enum class ExitCode : int { ok = 0, failure = 1, config = 2, precondition = 3, invariant = 4 };
ExitCode exit_code_for(const std::exception& error);

}  // namespace decolab
