#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "decolab/errors.hpp"
#include "decolab/runner.hpp"

namespace {

using namespace decolab;

int run_command(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::string& output_dir) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw Error("cannot read config " + config_path);
  std::ostringstream text;
  text << in.rdbuf();
  if (!output_dir.empty()) ::setenv(kOutputDirEnv, output_dir.c_str(), 1);
  for (RunConfig cfg : parse_configs(text.str())) {
    if (seed) cfg.seed = *seed;
    const RunReport report = execute(cfg);
    std::cout << cfg.scenario << ": " << report.trace_path.string() << " ("
              << format_real(report.wall_time.count()) << " s)\n";
    for (const auto& [key, value] : report.summary) std::cout << "  " << key << " = " << value << "\n";
  }
  return 0;
}

int list_command() {
  for (const auto& s : scenario_registry()) {
    std::cout << s.name << "\n  " << s.description << "\n";
    for (const auto& p : s.parameters) {
      std::string def = "required";
      if (p.default_value) {
        RunConfig probe;
        probe.scenario = s.name;
        probe.parameters[p.name] = *p.default_value;
        const std::string line = emit_config(probe);
        const auto at = line.find(p.name + " = ");
        def = line.substr(at + p.name.size() + 3);
        if (!def.empty() && def.back() == '\n') def.pop_back();
      }
      std::cout << "    " << p.name << " = " << def << "  [" << p.constraint() << "] "
                << p.description << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence laboratory: run scenarios, list presets, summarize traces"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Execute every [scenario] section of a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed, "override the seed of every section");
  run->add_option("--output-dir", output_dir, "directory for traces and reports");

  app.add_subcommand("list-scenarios", "List registered scenarios and their parameters");

  std::vector<std::string> traces;
  auto* summarize_cmd = app.add_subcommand("summarize", "Fit and compare CSV traces");
  summarize_cmd->add_option("traces", traces, "trace files");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return run_command(config_path, seed, output_dir);
    if (summarize_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(traces.begin(), traces.end());
      std::cout << summarize(paths).format();
      return 0;
    }
    return list_command();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(exit_code_for(e));
  }
}
