#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "qisim/cli/config.hpp"
#include "qisim/cli/run.hpp"

namespace {

using qisim::cli::RunConfig;
using qisim::cli::RunMode;

// Applies trailing `--key value` / `--key=value` overrides.
void apply_overrides(RunConfig& config, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2)
      throw qisim::cli::ConfigError("unexpected argument '" + arg + "'");
    std::string key = arg.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key.resize(eq);
    } else {
      if (i + 1 >= extras.size()) throw qisim::cli::ConfigError("missing value for --" + key);
      value = extras[++i];
    }
    qisim::cli::apply_setting(config, key, value);
  }
}

int execute(const std::string& path, const std::vector<std::string>& extras, RunMode mode) {
  RunConfig config = qisim::cli::load_config(path);
  apply_overrides(config, extras);
  const auto result = qisim::cli::run(config, mode);
  for (const auto& f : result.written) std::printf("wrote %s\n", f.c_str());
  for (const auto& f : result.failures) std::fprintf(stderr, "verification failed: %s\n", f.c_str());
  return result.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-illumination CNOT receiver simulator"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    RunMode mode;
    std::string config;
    CLI::App* app = nullptr;
  };
  Command commands[] = {
      {"run", "Analytic outputs plus Monte-Carlo verification when enabled", RunMode::Full, {}},
      {"verify", "Monte-Carlo verification suite only", RunMode::Verify, {}},
      {"curves", "Analytic outputs only", RunMode::Curves, {}},
  };
  for (auto& c : commands) {
    c.app = app.add_subcommand(c.name, c.help);
    c.app->add_option("config", c.config, "Configuration file (key = value)")->required();
    c.app->allow_extras();
    c.app->footer("Any config key may be overridden with --key value. Worker threads: QISIM_WORKERS.");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& c : commands)
      if (c.app->parsed()) return execute(c.config, c.app->remaining(), c.mode);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qisim: %s\n", e.what());
    return 2;
  }
  return 2;
}
