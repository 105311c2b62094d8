#include "decolab/runner.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "decolab/errors.hpp"

namespace decolab {
namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

Json real_json(double v) { return std::isfinite(v) ? Json(v) : Json(format_real(v)); }

Json param_json(const ParamValue& v) {
  if (const auto* r = std::get_if<double>(&v)) return real_json(*r);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Json(*i);
  Json list = Json::array();
  for (const cplx& c : std::get<ComplexList>(v)) list.push_back(Json::array({c.real(), c.imag()}));
  return list;
}

std::string one_line(const RunConfig& cfg) {
  std::string text = emit_config(cfg);
  for (char& ch : text)
    if (ch == '\n') ch = ';';
  return text;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return out;
}

double parse_field(std::string_view s, std::size_t line, const std::string& column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw SchemaError("line " + std::to_string(line) + ": '" + std::string(s) +
                          "' is not a number in column " + column,
                      column);
  return v;
}

}  // namespace

void InvariantAudit::enforce() const {
  if (!(trace_drift <= kTraceLimit)) throw InvariantError("final trace drift", trace_drift);
  if (!(hermiticity_drift <= kHermiticityLimit))
    throw InvariantError("final hermiticity drift", hermiticity_drift);
  if (!(min_eigenvalue >= kEigenvalueFloor))
    throw InvariantError("final min eigenvalue", min_eigenvalue);
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_csv(const ObservableTrace& trace) {
  std::string out = "time";
  for (const auto& c : trace.columns()) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < trace.size(); ++r) {
    out += format_real(trace.times()[r]);
    for (double v : trace.row(r)) out += "," + format_real(v);
    out += "\n";
  }
  return out;
}

ObservableTrace parse_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  if (lines.empty()) throw SchemaError("empty trace file", "time");
  const auto header = split_fields(lines[0]);
  if (header.front() != "time") throw SchemaError("first column must be 'time'", std::string(header.front()));
  std::vector<std::string> columns(header.begin() + 1, header.end());
  ObservableTrace trace(columns);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_fields(lines[l]);
    if (fields.size() != header.size())
      throw SchemaError("line " + std::to_string(l + 1) + " has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(header.size()),
                        fields.size() < header.size() ? std::string(header[fields.size()]) : "time");
    std::vector<double> values;
    for (std::size_t c = 1; c < fields.size(); ++c)
      values.push_back(parse_field(fields[c], l + 1, columns[c - 1]));
    trace.add(parse_field(fields[0], l + 1, "time"), std::move(values));
  }
  return trace;
}

ObservableTrace read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::filesystem::path resolve_output_path(const RunConfig& cfg) {
  std::filesystem::path path = cfg.output_path.empty() ? cfg.scenario + ".csv" : cfg.output_path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir && path.is_relative())
    path = std::filesystem::path(dir) / path;
  return path;
}

std::filesystem::path report_path_for(const std::filesystem::path& trace_path) {
  return trace_path.parent_path() / (trace_path.stem().string() + ".report.json");
}

std::string RunReport::to_json() const {
  Json params = Json::object();
  for (const auto& [key, value] : config.parameters) params[key] = param_json(value);
  Json summary_json = Json::object();
  for (const auto& [key, value] : summary) summary_json[key] = value;
  Json doc = {
      {"scenario", config.scenario},
      {"seed", config.seed},
      {"output", config.output_path},
      {"record_stride", config.record_stride},
      {"parameters", params},
      {"audit",
       {{"trace_drift", real_json(audit.trace_drift)},
        {"hermiticity_drift", real_json(audit.hermiticity_drift)},
        {"min_eigenvalue", real_json(audit.min_eigenvalue)}}},
      {"summary", summary_json},
      {"fit", {{"column", fit_column}, {"begin", real_json(fit_begin)}, {"end", real_json(fit_end)}}},
      {"trace", trace_path.filename().string()},
  };
  return doc.dump(2) + "\n";
}

RunReport execute(const RunConfig& cfg) {
  const ScenarioInfo& info = find_scenario(cfg.scenario);
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  try {
    result = info.run(cfg);
    result.audit.enforce();
  } catch (const InvariantError& e) {
    throw InvariantError(e.invariant() + " in run {" + one_line(cfg) + "}", e.magnitude(), e.step());
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string(e.what()) + " in run {" + one_line(cfg) + "}");
  } catch (const DimensionError& e) {
    throw DimensionError(std::string(e.what()) + " in run {" + one_line(cfg) + "}");
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " in run {" + one_line(cfg) + "}");
  }
  RunReport report;
  report.config = cfg;
  report.wall_time = std::chrono::steady_clock::now() - start;
  report.audit = result.audit;
  report.summary = std::move(result.summary);
  report.fit_column = result.fit_column;
  report.fit_begin = result.fit_begin;
  report.fit_end = result.fit_end;
  report.trace_path = resolve_output_path(cfg);
  report.report_path = report_path_for(report.trace_path);
  write_file(report.trace_path, format_csv(result.trace));
  write_file(report.report_path, report.to_json());
  return report;
}

std::string SummaryTable::format() const {
  std::vector<std::size_t> width(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += cells[c];
      if (c + 1 < cells.size()) out += std::string(width[c] - cells[c].size() + 2, ' ');
    }
    return out + "\n";
  };
  std::string out = line(columns);
  for (const auto& row : rows) out += line(row);
  return out;
}

SummaryTable summarize(const std::vector<std::filesystem::path>& traces) {
  SummaryTable table;
  table.columns = {"trace", "column", "rate", "max_log_residual", "ratio", "label"};
  if (traces.empty()) return table;
  std::vector<std::string> header;
  double first_rate = NAN;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const ObservableTrace trace = read_csv(traces[k]);
    if (k == 0) {
      header = trace.columns();
    } else if (trace.columns() != header) {
      std::string bad = "time";
      for (std::size_t c = 0; c < std::max(header.size(), trace.columns().size()); ++c) {
        const std::string a = c < header.size() ? header[c] : "";
        const std::string b = c < trace.columns().size() ? trace.columns()[c] : "";
        if (a != b) {
          bad = b.empty() ? a : b;
          break;
        }
      }
      throw SchemaError(traces[k].string() + " does not share the column layout of " +
                            traces[0].string() + " (column '" + bad + "')",
                        bad);
    }
    if (header.empty()) throw SchemaError(traces[k].string() + " has no data columns", "time");

    std::string column = header.front();
    std::string label;
    double begin = -INFINITY, end = INFINITY;
    const auto report = report_path_for(traces[k]);
    if (std::filesystem::exists(report)) {
      const Json doc = Json::parse(read_file(report));
      if (doc.contains("fit")) {
        const auto& fit = doc["fit"];
        if (fit.value("column", std::string{}) != "") column = fit["column"].get<std::string>();
        if (fit["begin"].is_number()) begin = fit["begin"].get<double>();
        if (fit["end"].is_number() && fit["end"].get<double>() > begin) end = fit["end"].get<double>();
      }
      if (doc.contains("summary") && doc["summary"].contains("label"))
        label = doc["summary"]["label"].get<std::string>();
      else
        label = doc.value("scenario", std::string{});
    }
    if (!trace.has_column(column))
      throw SchemaError(traces[k].string() + " lacks fit column '" + column + "'", column);
    const auto fit = fit_exponential(trace.times(), trace.column(column), begin, end);
    if (k == 0) first_rate = fit.rate;
    table.rows.push_back({traces[k].filename().string(), column, format_real(fit.rate),
                          format_real(fit.max_log_residual),
                          format_real(first_rate != 0.0 ? fit.rate / first_rate : NAN), label});
  }
  return table;
}

ExitCode exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const SchemaError*>(&error))
    return ExitCode::config;
  if (dynamic_cast<const PreconditionError*>(&error) || dynamic_cast<const DimensionError*>(&error))
    return ExitCode::precondition;
  if (dynamic_cast<const InvariantError*>(&error)) return ExitCode::invariant;
  return ExitCode::failure;
}

}  // namespace decolab
