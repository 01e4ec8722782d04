#pragma once

// CNOT receiver: ideal output moments, noise power, and the practical
// beamsplitter/squeezer realisation with finite squeezing and feedforward.
//
// Measured values are output powers: each output quadrature is split on a
// balanced beamsplitter before homodyning, contributing a factor 1/2 to the
// core-convention variance. The split vacuum adds 1/4 per measured quadrature.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qisim/channel.hpp"
#include "qisim/gaussian.hpp"

namespace qisim {

inline constexpr double kSplitVacuum = 0.25;

enum class Brightness {
  Exact,
  // Return-mode variances replaced by the bare bath under H1.
  LowBrightness,
};

struct HypothesisMoments {
  Hypothesis hypothesis = Hypothesis::H1;
  double gain = 0.0;
  // Core-convention variances of X_R, Y_R, X_M, Y_M after the gate.
  double var_xr = 0.0, var_yr = 0.0, var_xm = 0.0, var_ym = 0.0;
  // Measured-power normalisation (var / 2).
  double xr2 = 0.0, yr2 = 0.0, xm2 = 0.0, ym2 = 0.0;
  // Sum of the four powers plus two vacuum terms of 1/4.
  double receiver_output = 0.0;
  // Sum of the four measured powers including every split vacuum.
  double measured_power = 0.0;
  // Sum of the four powers.
  double noise_power = 0.0;

  std::array<double, 4> measured() const { return {xr2, yr2, xm2, ym2}; }
};

// Builds a moments record from the four core variances.
HypothesisMoments make_moments(Hypothesis h, double gain, double var_xr, double var_yr,
                               double var_xm, double var_ym);

// Closed forms.
HypothesisMoments ideal_moments(const ProtocolParams& params, Hypothesis h,
                                Brightness mode = Brightness::Exact);

// Propagates joint_state through cv_cnot and reads the covariance.
HypothesisMoments moments_from_state(const GaussianState& joint_rm, Hypothesis h, double gain);

struct MonteCarloMoments {
  HypothesisMoments moments;
  // Standard errors of xr2, yr2, xm2, ym2.
  std::array<double, 4> standard_errors{};
};

// Samples the source state, applies the channel and the CNOT to every draw.
// The same seed gives common random numbers across hypotheses.
MonteCarloMoments monte_carlo_moments(const ProtocolParams& params, Hypothesis h,
                                      std::size_t n_samples, std::uint64_t seed);

// 2 G sqrt(eta T N_S (N_S + 1))
double effective_signal_power(const ProtocolParams& params);
// I1 - I0 from the exact ideal moments.
double exact_signal_power(const ProtocolParams& params);
// exact - effective: (2 + G^2) eta (N_S - N_B) / 2
double low_brightness_correction(const ProtocolParams& params);

// N_B (1 + G^2/2)
double noise_power(const ProtocolParams& params);
// N_B (2 + G^2) + 4, the rounded added-photon count usually cited for the gate.
double nominal_added_photons(const ProtocolParams& params);

struct QuadratureRef {
  ModeLabel mode;
  Quadrature quadrature = Quadrature::X;

  bool operator==(const QuadratureRef&) const = default;
};

std::string to_string(const QuadratureRef& q);

class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::vector<std::pair<QuadratureRef, double>>& terms() const { return terms_; }

  // Accumulates onto an existing coefficient.
  LinearForm& add(const QuadratureRef& q, double coefficient);
  double coefficient(const QuadratureRef& q) const;

  // c^T sigma c; throws when a referenced mode is missing from the state.
  double variance(const GaussianState& state) const;
  // c^T sigma c restricted to the selected quadratures (both indices in the set).
  double partial_variance(const GaussianState& state,
                          const std::vector<QuadratureRef>& rows,
                          const std::vector<QuadratureRef>& cols) const;

 private:
  std::string name_;
  std::vector<std::pair<QuadratureRef, double>> terms_;
};

// Max absolute coefficient difference over the union of referenced quadratures.
double coefficient_distance(const LinearForm& a, const LinearForm& b);

// Mode labels used by the practical forms. The ancilla quadratures enter as
// vacuum with the squeezing factor e^{-r} folded into the coefficient; each
// output carries its own feedforward-inefficiency vacuum.
namespace practical_modes {
inline const ModeLabel kAncillaA = "HD_A";
inline const ModeLabel kAncillaB = "HD_B";
inline const ModeLabel kVacXR = "V_XR";
inline const ModeLabel kVacYR = "V_YR";
inline const ModeLabel kVacXM = "V_XM";
inline const ModeLabel kVacYM = "V_YM";
}  // namespace practical_modes

// Output order: X_R, Y_R, X_M, Y_M.
std::array<LinearForm, 4> practical_outputs(const ProtocolParams& params);
std::array<LinearForm, 4> ideal_outputs(double gain);

// joint_state(params, h) extended with the ancilla and feedforward vacua.
GaussianState practical_input_state(const ProtocolParams& params, Hypothesis h);

struct BudgetEntry {
  std::string quadrature;  // "X_R", "Y_R", "X_M", "Y_M"
  double bath = 0.0;
  double memory = 0.0;
  double cross = 0.0;
  double ancilla = 0.0;
  double feedforward_vacuum = 0.0;
  double split_vacuum = 0.0;
  double total = 0.0;  // measured variance of the form

  double contributions_sum() const {
    return bath + memory + cross + ancilla + feedforward_vacuum + split_vacuum;
  }
};

struct NoiseBudget {
  Hypothesis hypothesis = Hypothesis::H0;
  double gain = 0.0;
  std::array<BudgetEntry, 4> entries;
  // Ancilla plus feedforward vacuum, in units of the measured vacuum level,
  // summed over the four outputs.
  double internal_added_photons = 0.0;

  double total() const;
  double bath_share() const;
};

NoiseBudget practical_noise_budget(const ProtocolParams& params, Hypothesis h);

}  // namespace qisim
