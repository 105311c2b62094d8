#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/runner.hpp"

namespace decolab {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "a", "bi", "a+bi", "a-bi", "i", "-i".
std::optional<cplx> parse_complex(std::string_view s) {
  std::string t;
  for (char ch : s)
    if (ch != ' ' && ch != '\t') t.push_back(ch);
  if (t.empty()) return std::nullopt;
  if (t.back() != 'i') {
    const auto re = parse_real(t);
    if (!re) return std::nullopt;
    return cplx(*re, 0.0);
  }
  t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string re_part = split == std::string::npos ? "0" : t.substr(0, split);
  std::string im_part = split == std::string::npos ? t : t.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  const auto re = parse_real(re_part);
  const auto im = parse_real(im_part);
  if (!re || !im) return std::nullopt;
  return cplx(*re, *im);
}

std::string emit_complex(cplx c) {
  std::string out = format_real(c.real());
  out += std::signbit(c.imag()) ? "-" : "+";
  out += format_real(std::abs(c.imag()));
  out += "i";
  return out;
}

std::string emit_value(const ParamValue& v) {
  if (const auto* r = std::get_if<double>(&v)) return format_real(*r);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  std::string out;
  for (const cplx& c : std::get<ComplexList>(v)) {
    if (!out.empty()) out += ", ";
    out += emit_complex(c);
  }
  return out;
}

bool within(const ParamSpec& spec, double v) {
  if (std::isnan(v)) return false;
  if (std::isinf(v) && !spec.allow_infinity) return false;
  if (spec.lower && (spec.lower_inclusive ? v < *spec.lower : v <= *spec.lower)) return false;
  if (spec.upper && (spec.upper_inclusive ? v > *spec.upper : v >= *spec.upper)) return false;
  return true;
}

ParamValue parse_value(const ParamSpec& spec, std::string_view text, std::size_t line) {
  const std::string shown(trim(text));
  switch (spec.kind) {
    case ParamKind::real: {
      const auto v = parse_real(text);
      if (!v) throw ConfigError(spec.name + " = " + shown + " is not a real number", line);
      if (!within(spec, *v))
        throw ConfigError(spec.name + " = " + shown + " violates " + spec.constraint(), line);
      return *v;
    }
    case ParamKind::integer: {
      const auto v = parse_integer(text);
      if (!v) throw ConfigError(spec.name + " = " + shown + " is not an integer", line);
      if (!within(spec, static_cast<double>(*v)))
        throw ConfigError(spec.name + " = " + shown + " violates " + spec.constraint(), line);
      return *v;
    }
    case ParamKind::complex_list: {
      ComplexList list;
      std::string_view rest = text;
      while (true) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        const auto c = parse_complex(item);
        if (!c || !std::isfinite(c->real()) || !std::isfinite(c->imag()))
          throw ConfigError(spec.name + ": '" + std::string(item) + "' is not a complex number",
                            line);
        list.push_back(*c);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
      return list;
    }
  }
  throw ConfigError("unsupported parameter kind", line);
}

struct Section {
  RunConfig cfg;
  std::size_t line = 0;
  std::set<std::string> seen;
  const ScenarioInfo* info = nullptr;
};

void finish(Section& s) {
  for (const auto& spec : s.info->parameters) {
    if (s.cfg.parameters.count(spec.name)) continue;
    if (!spec.default_value)
      throw ConfigError("[" + s.cfg.scenario + "] is missing required key '" + spec.name +
                            "' (" + spec.constraint() + ")",
                        s.line);
    s.cfg.parameters[spec.name] = *spec.default_value;
  }
  if (s.cfg.output_path.empty()) s.cfg.output_path = s.cfg.scenario + ".csv";
}

}  // namespace

std::string ParamSpec::constraint() const {
  const char* lo = lower_inclusive ? " ≤ " : " < ";
  const char* hi = upper_inclusive ? " ≤ " : " < ";
  if (lower && upper) return short_real(*lower) + lo + name + hi + short_real(*upper);
  if (lower) return name + (lower_inclusive ? " ≥ " : " > ") + short_real(*lower);
  if (upper) return name + (upper_inclusive ? " ≤ " : " < ") + short_real(*upper);
  return name + " finite";
}

double RunConfig::real(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) throw ConfigError("missing parameter '" + key + "'");
  if (const auto* r = std::get_if<double>(&it->second)) return *r;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*i);
  throw ConfigError("parameter '" + key + "' is not real");
}

std::int64_t RunConfig::integer(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) throw ConfigError("missing parameter '" + key + "'");
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  throw ConfigError("parameter '" + key + "' is not an integer");
}

const ComplexList& RunConfig::complex_list(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) throw ConfigError("missing parameter '" + key + "'");
  if (const auto* c = std::get_if<ComplexList>(&it->second)) return *c;
  throw ConfigError("parameter '" + key + "' is not a complex list");
}

std::vector<RunConfig> parse_configs(std::string_view text) {
  std::vector<RunConfig> out;
  std::optional<Section> current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      if (current) {
        finish(*current);
        out.push_back(std::move(current->cfg));
      }
      current.emplace();
      current->line = line_no;
      current->cfg.scenario = std::string(trim(line.substr(1, line.size() - 2)));
      try {
        current->info = &find_scenario(current->cfg.scenario);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_no);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    if (!current) throw ConfigError("key outside of a [scenario] section", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (!current->seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line_no);

    if (key == "seed") {
      std::uint64_t seed = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("seed = " + std::string(value) + " is not a 64-bit unsigned integer", line_no);
      current->cfg.seed = seed;
    } else if (key == "output") {
      if (value.empty()) throw ConfigError("output must not be empty", line_no);
      current->cfg.output_path = std::string(value);
    } else if (key == "record_stride") {
      const auto v = parse_integer(value);
      if (!v || *v < 1) throw ConfigError("record_stride = " + std::string(value) + " violates record_stride ≥ 1", line_no);
      current->cfg.record_stride = static_cast<std::size_t>(*v);
    } else {
      const ParamSpec* spec = nullptr;
      for (const auto& p : current->info->parameters)
        if (p.name == key) spec = &p;
      if (!spec)
        throw ConfigError("unknown key '" + key + "' for scenario " + current->cfg.scenario, line_no);
      current->cfg.parameters[key] = parse_value(*spec, value, line_no);
    }
  }
  if (current) {
    finish(*current);
    out.push_back(std::move(current->cfg));
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  auto all = parse_configs(text);
  if (all.size() != 1)
    throw ConfigError("expected exactly one [scenario] section, found " + std::to_string(all.size()));
  return std::move(all.front());
}

std::string emit_config(const RunConfig& cfg) {
  std::string out = "[" + cfg.scenario + "]\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  if (!cfg.output_path.empty()) out += "output = " + cfg.output_path + "\n";
  out += "record_stride = " + std::to_string(cfg.record_stride) + "\n";
  for (const auto& [key, value] : cfg.parameters) out += key + " = " + emit_value(value) + "\n";
  return out;
}

}  // namespace decolab
