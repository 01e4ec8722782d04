#pragma once

// Error exponents and minimum error probabilities for the receiver family.

#include <string>
#include <vector>

#include "qisim/channel.hpp"

namespace qisim {

enum class ReceiverKind { CNOT, OPA, PC, SFG, ClassicalCI };
enum class LossMode { Lossless, Lossy };

const char* to_string(ReceiverKind r);
const char* to_string(LossMode m);
ReceiverKind parse_receiver(const std::string& name);

inline constexpr ReceiverKind kAllReceivers[] = {ReceiverKind::CNOT, ReceiverKind::OPA,
                                                 ReceiverKind::PC, ReceiverKind::SFG,
                                                 ReceiverKind::ClassicalCI};
inline constexpr LossMode kAllLossModes[] = {LossMode::Lossless, LossMode::Lossy};

// Per-probe exponent. Lossless variants use T = 1. The classical benchmark is
// ci_factor * eta * N_S / N_B, times T in lossy mode.
double exponent(ReceiverKind r, LossMode mode, const ProtocolParams& params);

// 4 * exponent(CNOT)
double snr_cnot(const ProtocolParams& params, LossMode mode = LossMode::Lossy);

struct ErrorProbability {
  double pe_bound = 0.0;   // exp(-K R) / 2
  double pe_exact = 0.0;   // erfc(sqrt(K R)) / 2
  double pe_approx = 0.0;  // exp(-K R) / (2 sqrt(pi K R)); +inf at K R = 0
};

ErrorProbability min_error_probability(double exponent, double probes);

struct ErrorPoint {
  double probes = 0.0;
  double pe_bound = 0.0;
  double pe_exact = 0.0;
};

struct ErrorCurve {
  ReceiverKind receiver = ReceiverKind::CNOT;
  LossMode loss_mode = LossMode::Lossy;
  ProtocolParams params;
  double exponent = 0.0;
  std::vector<ErrorPoint> points;
};

// One curve per (receiver, loss mode), receivers in the given order,
// lossless before lossy. Throws on an empty or non-ascending grid.
std::vector<ErrorCurve> sweep(const std::vector<ReceiverKind>& receivers,
                              const ProtocolParams& params, const std::vector<double>& k_grid);

enum class GridScale { Log, Linear };
std::vector<double> probe_grid(double k_min, double k_max, std::size_t points, GridScale scale);

// p(n) = N^n / (N + 1)^(n + 1), n = 0..n_max
std::vector<double> tmsv_number_distribution(double mean_photons, std::size_t n_max);

// Smallest G at which the lossy CNOT exponent reaches the lossy OPA exponent.
double crossover_gain(const ProtocolParams& params, double tolerance = 1e-12);

}  // namespace qisim
