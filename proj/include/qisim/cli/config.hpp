#pragma once

// Run configuration: flat `key = value` lines, optional `[section]` headers,
// `#` comments. Keys may be written bare or as `section.key`; sections only
// scope the keys that follow them.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qisim/channel.hpp"
#include "qisim/error_analysis.hpp"

namespace qisim::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct MonteCarloConfig {
  bool enabled = true;
  std::size_t n_samples = 1'000'000;
  std::size_t n_trials = 200'000;
  std::uint64_t seed = 20240521;
  double lo_amplitude = 1e3;
};

struct EmitConfig {
  bool curves_csv = true;
  bool moments_csv = true;
  bool noise_budget_csv = true;
  bool report = true;
};

struct RunConfig {
  ProtocolParams params;
  std::vector<ReceiverKind> receivers{std::begin(kAllReceivers), std::end(kAllReceivers)};
  std::vector<double> gains{1.0, 3.0, 6.0};
  double k_min = 1e3;
  double k_max = 1e8;
  std::size_t k_points = 50;
  GridScale k_scale = GridScale::Log;
  MonteCarloConfig monte_carlo;
  std::string output_dir = "qisim_out";
  EmitConfig emit;
  // Set when `gains` was given explicitly rather than defaulted.
  bool gains_explicit = false;

  // Throws ConfigError naming the offending key.
  void validate() const;
  std::vector<double> k_grid() const;
  // The gain list, or the single gain implied by g when gains were not given.
  std::vector<double> effective_gains() const;
};

// Every accepted key, in canonical `section.key` form.
const std::vector<std::string>& known_keys();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Applies one `key = value` assignment (bare or dotted key) to a config.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   std::size_t line = 0);

}  // namespace qisim::cli
