#pragma once

// Balanced double-port homodyne with a classical local oscillator.
//
// The current is I = n1 - n2 = sqrt(2) |alpha| (x sin(phi) - y cos(phi)), so
// phase pi reads Y and phase pi/2 reads X; the normalised quadrature is
// I / (|alpha| sqrt(2)).

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "qisim/channel.hpp"
#include "qisim/gaussian.hpp"
#include "qisim/receiver.hpp"

namespace qisim {

struct LocalOscillator {
  double amplitude = 1e3;
  double phase = std::numbers::pi;

  static LocalOscillator for_quadrature(double amplitude, Quadrature q) {
    return {amplitude, q == Quadrature::X ? std::numbers::pi / 2 : std::numbers::pi};
  }
};

struct HomodyneRecord {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double mean_current = 0.0;
  double current_variance = 0.0;
  double normalized_quadrature_mean = 0.0;
  double normalized_quadrature_variance = 0.0;
  // Gaussian standard errors of the four statistics above.
  double mean_current_se = 0.0;
  double current_variance_se = 0.0;
  double normalized_mean_se = 0.0;
  double normalized_variance_se = 0.0;
};

// Throws on a non-positive amplitude or when the LO phase does not select
// the requested quadrature.
HomodyneRecord simulate_homodyne(const GaussianState& state, const ModeLabel& mode,
                                 const LocalOscillator& lo, Quadrature quadrature,
                                 std::size_t n_samples, std::uint64_t seed);

struct SplitRecord {
  HomodyneRecord x;
  HomodyneRecord y;
  // Sample correlation coefficient of the simultaneous X and Y outcomes.
  double correlation = 0.0;
  double correlation_se = 0.0;
};

// Mixes `mode` with vacuum on a balanced beamsplitter, reads X on the first
// arm and Y on the second.
SplitRecord split_and_measure(const GaussianState& state, const ModeLabel& mode,
                              double lo_amplitude, std::size_t n_samples, std::uint64_t seed);

struct DecisionOptions {
  double lo_amplitude = 1e3;
  Brightness mode = Brightness::Exact;
};

struct DecisionStatistic {
  Hypothesis hypothesis = Hypothesis::H1;
  std::size_t n_trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
};

struct PairedStatistic {
  DecisionStatistic h1;
  DecisionStatistic h0;
  double mean_difference = 0.0;
  double difference_se = 0.0;
};

// Per trial: source state, channel, CNOT, split of each output, four
// homodyne readings; the statistic is the sum of the squared normalised
// outcomes. Its expectation is HypothesisMoments::measured_power.
DecisionStatistic receiver_decision_statistic(const ProtocolParams& params, Hypothesis h,
                                              std::size_t n_trials, std::uint64_t seed,
                                              const DecisionOptions& options = {});

// Both hypotheses on common random numbers; the difference is per trial.
PairedStatistic paired_decision_statistic(const ProtocolParams& params, std::size_t n_trials,
                                          std::uint64_t seed, const DecisionOptions& options = {});

// Exact variance of the statistic, 2 tr(C^2) with C the covariance of the
// four measured quadratures.
double decision_statistic_variance(const ProtocolParams& params, Hypothesis h,
                                   Brightness mode = Brightness::Exact);

}  // namespace qisim
