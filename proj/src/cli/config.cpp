#include "qisim/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace qisim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, std::size_t line) {
  const std::string t = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out))
    throw ConfigError(key + ": expected a number, got '" + t + "'", line);
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v, std::size_t line) {
  const std::string t = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (!t.empty() && ec == std::errc() && ptr == t.data() + t.size()) return out;
  // Allow integral values in scientific notation, e.g. 1e6.
  const double d = to_double(key, t, line);
  if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15)
    throw ConfigError(key + ": expected a non-negative integer, got '" + t + "'", line);
  return static_cast<std::uint64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v, std::size_t line) {
  std::string t = trim(v);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + trim(v) + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
  std::string s = v;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string item; in >> item;) out.push_back(item);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, std::size_t)>;

struct KeySpec {
  std::string section;
  std::string name;
  Setter set;
};

void set_tau_w(RunConfig& c, std::optional<double> tau, std::optional<double> w) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto pair = c.params.tau_w.value_or(std::make_pair(nan, nan));
  if (tau) pair.first = *tau;
  if (w) pair.second = *w;
  c.params.tau_w = pair;
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto num = [&t](std::string section, std::string name, double ProtocolParams::*field) {
      t.push_back({section, name, [name, field](RunConfig& c, const std::string& v, std::size_t l) {
                     c.params.*field = to_double(name, v, l);
                   }});
    };
    num("params", "eta", &ProtocolParams::eta);
    num("params", "T", &ProtocolParams::memory_transmissivity);
    num("params", "N_S", &ProtocolParams::signal_photons);
    num("params", "N_B", &ProtocolParams::bath_photons);
    num("params", "r_A", &ProtocolParams::squeezing_a);
    num("params", "r_B", &ProtocolParams::squeezing_b);
    num("params", "gamma", &ProtocolParams::homodyne_efficiency);
    num("params", "K", &ProtocolParams::probe_pairs);
    num("params", "ci_factor", &ProtocolParams::ci_factor);
    t.push_back({"params", "g", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.params.beamsplitter_g = to_double("g", v, l);
                 }});
    t.push_back({"params", "tau", [](RunConfig& c, const std::string& v, std::size_t l) {
                   set_tau_w(c, to_double("tau", v, l), std::nullopt);
                 }});
    t.push_back({"params", "W", [](RunConfig& c, const std::string& v, std::size_t l) {
                   set_tau_w(c, std::nullopt, to_double("W", v, l));
                 }});

    t.push_back({"sweep", "receivers", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.receivers.clear();
                   for (const auto& item : split_list(v)) {
                     try {
                       c.receivers.push_back(parse_receiver(item));
                     } catch (const std::invalid_argument& e) {
                       throw ConfigError(std::string("receivers: ") + e.what(), l);
                     }
                   }
                 }});
    t.push_back({"sweep", "gains", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.gains.clear();
                   for (const auto& item : split_list(v)) c.gains.push_back(to_double("gains", item, l));
                   c.gains_explicit = true;
                 }});
    t.push_back({"sweep", "k_min", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.k_min = to_double("k_min", v, l);
                 }});
    t.push_back({"sweep", "k_max", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.k_max = to_double("k_max", v, l);
                 }});
    t.push_back({"sweep", "k_points", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.k_points = to_uint("k_points", v, l);
                 }});
    t.push_back({"sweep", "k_scale", [](RunConfig& c, const std::string& v, std::size_t l) {
                   const std::string s = trim(v);
                   if (s == "log") c.k_scale = GridScale::Log;
                   else if (s == "linear") c.k_scale = GridScale::Linear;
                   else throw ConfigError("k_scale: expected 'log' or 'linear', got '" + s + "'", l);
                 }});

    t.push_back({"monte_carlo", "enabled", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.monte_carlo.enabled = to_bool("enabled", v, l);
                 }});
    t.push_back({"monte_carlo", "n_samples", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.monte_carlo.n_samples = to_uint("n_samples", v, l);
                 }});
    t.push_back({"monte_carlo", "n_trials", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.monte_carlo.n_trials = to_uint("n_trials", v, l);
                 }});
    t.push_back({"monte_carlo", "seed", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.monte_carlo.seed = to_uint("seed", v, l);
                 }});
    t.push_back({"monte_carlo", "lo_amplitude", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.monte_carlo.lo_amplitude = to_double("lo_amplitude", v, l);
                 }});

    t.push_back({"output", "dir", [](RunConfig& c, const std::string& v, std::size_t l) {
                   c.output_dir = trim(v);
                   if (c.output_dir.empty()) throw ConfigError("dir: must not be empty", l);
                 }});
    auto flag = [&t](std::string name, bool EmitConfig::*field) {
      t.push_back({"output", name, [name, field](RunConfig& c, const std::string& v, std::size_t l) {
                     c.emit.*field = to_bool(name, v, l);
                   }});
    };
    flag("curves_csv", &EmitConfig::curves_csv);
    flag("moments_csv", &EmitConfig::moments_csv);
    flag("noise_budget_csv", &EmitConfig::noise_budget_csv);
    flag("report", &EmitConfig::report);
    return t;
  }();
  return table;
}

const KeySpec& lookup(const std::string& key, const std::string& section, std::size_t line) {
  std::string sec = section, name = key;
  if (const auto dot = key.find('.'); dot != std::string::npos) {
    sec = key.substr(0, dot);
    name = key.substr(dot + 1);
  }
  for (const auto& spec : key_table()) {
    if (spec.name != name) continue;
    if (!sec.empty() && spec.section != sec)
      throw ConfigError("key '" + name + "' does not belong to section [" + sec + "]", line);
    return spec;
  }
  throw ConfigError("unknown key '" + key + "'", line);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& spec : key_table()) k.push_back(spec.section + "." + spec.name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value,
                   std::size_t line) {
  lookup(trim(key), "", line).set(config, value, line);
}

void RunConfig::validate() const {
  if (params.tau_w && (std::isnan(params.tau_w->first) || std::isnan(params.tau_w->second)))
    throw ConfigError("tau and W must be given together");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (receivers.empty()) throw ConfigError("receivers: at least one receiver is required");
  if (gains.empty()) throw ConfigError("gains: at least one gain is required");
  for (double g : gains)
    if (!(g >= 0.0)) throw ConfigError("gains: every gain must be >= 0");
  if (params.beamsplitter_g && gains_explicit) {
    const double from_g = gain_from_g(*params.beamsplitter_g);
    if (gains.size() != 1 || std::abs(gains.front() - from_g) >= 1e-9)
      throw ConfigError("g: conflicts with gains (G = (1 - g)/sqrt(g) = " + std::to_string(from_g) +
                        ")");
  }
  if (!(k_min >= 1.0)) throw ConfigError("k_min: must be >= 1");
  if (!(k_max > k_min)) throw ConfigError("k_max: must exceed k_min");
  if (k_points < 2) throw ConfigError("k_points: must be >= 2");
  if (monte_carlo.enabled) {
    if (monte_carlo.n_samples < 2) throw ConfigError("n_samples: must be >= 2");
    if (monte_carlo.n_trials < 2) throw ConfigError("n_trials: must be >= 2");
    if (!(monte_carlo.lo_amplitude > 0.0)) throw ConfigError("lo_amplitude: must be > 0");
  }
}

std::vector<double> RunConfig::k_grid() const { return probe_grid(k_min, k_max, k_points, k_scale); }

std::vector<double> RunConfig::effective_gains() const {
  if (params.beamsplitter_g && !gains_explicit) return {gain_from_g(*params.beamsplitter_g)};
  return gains;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string section;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header '" + line + "'", line_no);
      section = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(key_table().begin(), key_table().end(),
                                     [&](const KeySpec& k) { return k.section == section; });
      if (!known) throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no);
    lookup(key, section, line_no).set(config, line.substr(eq + 1), line_no);
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace qisim::cli
