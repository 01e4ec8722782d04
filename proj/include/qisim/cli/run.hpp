#pragma once

#include <string>
#include <vector>

#include "qisim/cli/config.hpp"

namespace qisim::cli {

enum class RunMode {
  Full,     // curves, moments, noise budget, report; Monte Carlo if enabled
  Verify,   // Monte-Carlo suite only
  Curves,   // analytic outputs only
};

struct RunResult {
  int exit_status = 0;
  std::vector<std::string> failures;  // one entry per Monte-Carlo check beyond 5 SE
  std::vector<std::string> written;   // paths of the files produced
};

inline constexpr double kMonteCarloThreshold = 5.0;

// %.8e
std::string format_number(double v);

RunResult run(const RunConfig& config, RunMode mode);

}  // namespace qisim::cli
