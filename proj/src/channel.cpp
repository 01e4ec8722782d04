#include "qisim/channel.hpp"

#include <stdexcept>
#include <string>

namespace qisim {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const char* to_string(Hypothesis h) { return h == Hypothesis::H1 ? "H1" : "H0"; }

void ProtocolParams::validate() const {
  require(finite(eta) && eta >= 0.0 && eta <= 1.0, "eta", "must lie in [0, 1]");
  require(finite(memory_transmissivity) && memory_transmissivity >= 0.0 &&
              memory_transmissivity <= 1.0,
          "T", "must lie in [0, 1]");
  require(finite(signal_photons) && signal_photons >= 0.0, "N_S", "must be >= 0");
  require(finite(bath_photons) && bath_photons >= 0.0, "N_B", "must be >= 0");
  require(finite(gain) && gain >= 0.0, "G", "must be >= 0");
  if (beamsplitter_g) {
    const double g = *beamsplitter_g;
    require(finite(g) && g > 0.0 && g <= 1.0, "g", "must lie in (0, 1]");
  }
  require(finite(squeezing_a) && squeezing_a >= 0.0, "r_A", "must be >= 0");
  require(finite(squeezing_b) && squeezing_b >= 0.0, "r_B", "must be >= 0");
  require(finite(homodyne_efficiency) && homodyne_efficiency > 0.0 && homodyne_efficiency <= 1.0,
          "gamma", "must lie in (0, 1]");
  require(finite(ci_factor) && ci_factor > 0.0, "ci_factor", "must be > 0");
  if (tau_w) {
    require(finite(tau_w->first) && tau_w->first > 0.0, "tau", "must be > 0");
    require(finite(tau_w->second) && tau_w->second > 0.0, "W", "must be > 0");
  }
  require(finite(probes()) && probes() >= 1.0, "K", "must be >= 1");
}

double ProtocolParams::resolved_gain() const {
  return beamsplitter_g ? gain_from_g(*beamsplitter_g) : gain;
}

double ProtocolParams::resolved_g() const {
  return beamsplitter_g ? *beamsplitter_g : g_from_gain(gain);
}

double ProtocolParams::probes() const {
  if (tau_w) return std::round(tau_w->first * tau_w->second);
  return probe_pairs;
}

double gain_from_g(double g) {
  if (!(g > 0.0 && g <= 1.0)) throw std::domain_error("g must lie in (0, 1]");
  return (1.0 - g) / std::sqrt(g);
}

double g_from_gain(double gain) {
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw std::domain_error("G must be finite and >= 0");
  // sqrt(g) solves s^2 + G s - 1 = 0
  const double s = 2.0 / (gain + std::sqrt(gain * gain + 4.0));
  return s * s;
}

GaussianState source_state(const ProtocolParams& params) {
  params.validate();
  return tensor(tensor(make_tmsv(params.signal_photons, "S", "I"),
                       make_thermal(params.bath_photons, "B")),
                make_vacuum("V"));
}

SymplecticOp channel_op(const ProtocolParams& params, Hypothesis h) {
  params.validate();
  const double t = h == Hypothesis::H1 ? params.eta : 0.0;
  return compose(beamsplitter(params.memory_transmissivity, "I", "V"), beamsplitter(t, "S", "B"));
}

GaussianState joint_state(const ProtocolParams& params, Hypothesis h) {
  const GaussianState full = apply(channel_op(params, h), source_state(params));
  const ModeLabel keep[] = {"S", "I"};
  return full.marginal(keep).relabeled("S", "R").relabeled("I", "M");
}

}  // namespace qisim
