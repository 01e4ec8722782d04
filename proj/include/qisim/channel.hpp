#pragma once

// Protocol parameters and the joint (return R, memory M) state per hypothesis.

#include <cmath>
#include <optional>
#include <utility>

#include "qisim/gaussian.hpp"

namespace qisim {

enum class Hypothesis { H0, H1 };

const char* to_string(Hypothesis h);

struct ProtocolParams {
  double eta = 0.01;                   // channel power transmissivity
  double memory_transmissivity = 0.7;  // T
  double signal_photons = 0.01;        // N_S
  double bath_photons = 20.0;          // N_B
  double gain = 1.0;                   // G, ignored when beamsplitter_g is set
  std::optional<double> beamsplitter_g;
  double squeezing_a = 0.5 * std::log(2.0);
  double squeezing_b = 0.5 * std::log(2.0);
  double homodyne_efficiency = 0.97;   // gamma
  double probe_pairs = 1.0;            // K
  std::optional<std::pair<double, double>> tau_w;
  double ci_factor = 0.25;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  double resolved_gain() const;
  // g for the practical gate; derived from G when not given.
  double resolved_g() const;
  double probes() const;
};

// G = (1 - g)/sqrt(g)
double gain_from_g(double g);
// Inverse of gain_from_g on (0, 1].
double g_from_gain(double gain);

// Modes "R" and "M".
GaussianState joint_state(const ProtocolParams& params, Hypothesis h);

// H1 state before the channel: TMSV (S, I), thermal bath B, memory vacuum V.
GaussianState source_state(const ProtocolParams& params);
// Channel plus memory loss as one op on (S, I, B, V); S -> R, I -> M.
SymplecticOp channel_op(const ProtocolParams& params, Hypothesis h);

}  // namespace qisim
