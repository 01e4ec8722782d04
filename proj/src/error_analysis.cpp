#include "qisim/error_analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qisim/receiver.hpp"

namespace qisim {

const char* to_string(ReceiverKind r) {
  switch (r) {
    case ReceiverKind::CNOT: return "CNOT";
    case ReceiverKind::OPA: return "OPA";
    case ReceiverKind::PC: return "PC";
    case ReceiverKind::SFG: return "SFG";
    case ReceiverKind::ClassicalCI: return "CI";
  }
  throw std::logic_error("unknown receiver kind");
}

const char* to_string(LossMode m) { return m == LossMode::Lossless ? "LL" : "L"; }

ReceiverKind parse_receiver(const std::string& name) {
  for (ReceiverKind r : kAllReceivers)
    if (name == to_string(r)) return r;
  if (name == "ClassicalCI") return ReceiverKind::ClassicalCI;
  throw std::invalid_argument("unknown receiver '" + name + "' (expected CNOT, OPA, PC, SFG or CI)");
}

double exponent(ReceiverKind r, LossMode mode, const ProtocolParams& params) {
  params.validate();
  if (!(params.bath_photons > 0.0)) throw std::domain_error("error exponents need N_B > 0");
  const double t = mode == LossMode::Lossless ? 1.0 : params.memory_transmissivity;
  const double base = params.eta * t * params.signal_photons / params.bath_photons;
  switch (r) {
    case ReceiverKind::OPA:
    case ReceiverKind::PC:
      return base / 2.0;
    case ReceiverKind::SFG:
      return base;
    case ReceiverKind::ClassicalCI:
      return params.ci_factor * base;
    case ReceiverKind::CNOT: {
      const double g = params.resolved_gain();
      return params.eta * g * g * t * params.signal_photons / (2.0 * noise_power(params));
    }
  }
  throw std::logic_error("unknown receiver kind");
}

double snr_cnot(const ProtocolParams& params, LossMode mode) {
  return 4.0 * exponent(ReceiverKind::CNOT, mode, params);
}

ErrorProbability min_error_probability(double exponent, double probes) {
  if (!(exponent >= 0.0) || !std::isfinite(exponent))
    throw std::domain_error("exponent must be finite and >= 0");
  if (!(probes >= 1.0) || !std::isfinite(probes))
    throw std::domain_error("probe count must be finite and >= 1");
  const double x = exponent * probes;
  ErrorProbability p;
  p.pe_bound = 0.5 * std::exp(-x);
  p.pe_exact = 0.5 * std::erfc(std::sqrt(x));
  p.pe_approx = x > 0.0 ? std::exp(-x) / (2.0 * std::sqrt(std::numbers::pi * x))
                        : std::numeric_limits<double>::infinity();
  return p;
}

std::vector<ErrorCurve> sweep(const std::vector<ReceiverKind>& receivers,
                              const ProtocolParams& params, const std::vector<double>& k_grid) {
  if (k_grid.empty()) throw std::invalid_argument("K grid is empty");
  for (std::size_t i = 1; i < k_grid.size(); ++i)
    if (!(k_grid[i] > k_grid[i - 1])) throw std::invalid_argument("K grid must be ascending");
  std::vector<ErrorCurve> curves;
  for (ReceiverKind r : receivers) {
    for (LossMode mode : kAllLossModes) {
      ErrorCurve c{r, mode, params, exponent(r, mode, params), {}};
      c.points.reserve(k_grid.size());
      for (double k : k_grid) {
        const ErrorProbability p = min_error_probability(c.exponent, k);
        c.points.push_back({k, p.pe_bound, p.pe_exact});
      }
      curves.push_back(std::move(c));
    }
  }
  return curves;
}

std::vector<double> probe_grid(double k_min, double k_max, std::size_t points, GridScale scale) {
  if (points < 2) throw std::invalid_argument("K grid needs at least 2 points");
  if (!(k_min >= 1.0) || !(k_max > k_min) || !std::isfinite(k_max))
    throw std::invalid_argument("K grid needs 1 <= k_min < k_max");
  std::vector<double> grid(points);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / last;
    grid[i] = scale == GridScale::Log
                  ? std::pow(10.0, std::log10(k_min) + f * (std::log10(k_max) - std::log10(k_min)))
                  : k_min + f * (k_max - k_min);
  }
  grid.front() = k_min;
  grid.back() = k_max;
  return grid;
}

std::vector<double> tmsv_number_distribution(double mean_photons, std::size_t n_max) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
    throw std::domain_error("mean photon number must be finite and >= 0");
  std::vector<double> p(n_max + 1);
  const double ratio = mean_photons / (mean_photons + 1.0);
  double v = 1.0 / (mean_photons + 1.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    p[n] = v;
    v *= ratio;
  }
  return p;
}

double crossover_gain(const ProtocolParams& params, double tolerance) {
  const double target = exponent(ReceiverKind::OPA, LossMode::Lossy, params);
  auto excess = [&](double g) {
    ProtocolParams p = params;
    p.beamsplitter_g.reset();
    p.gain = g;
    return exponent(ReceiverKind::CNOT, LossMode::Lossy, p) - target;
  };
  double lo = 0.0, hi = 1.0;
  while (excess(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw std::domain_error("CNOT exponent never reaches the OPA exponent");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qisim
