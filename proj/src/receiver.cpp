#include "qisim/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qisim {

namespace {

namespace pm = practical_modes;

QuadratureRef xq(const ModeLabel& m) { return {m, Quadrature::X}; }
QuadratureRef yq(const ModeLabel& m) { return {m, Quadrature::Y}; }

double cross_core(const ProtocolParams& p) {
  return std::sqrt(p.eta * p.memory_transmissivity * p.signal_photons * (1.0 + p.signal_photons));
}

bool contains(const std::vector<QuadratureRef>& set, const QuadratureRef& q) {
  return std::find(set.begin(), set.end(), q) != set.end();
}

}  // namespace

HypothesisMoments make_moments(Hypothesis h, double gain, double var_xr, double var_yr,
                               double var_xm, double var_ym) {
  HypothesisMoments m;
  m.hypothesis = h;
  m.gain = gain;
  m.var_xr = var_xr;
  m.var_yr = var_yr;
  m.var_xm = var_xm;
  m.var_ym = var_ym;
  m.xr2 = 0.5 * var_xr;
  m.yr2 = 0.5 * var_yr;
  m.xm2 = 0.5 * var_xm;
  m.ym2 = 0.5 * var_ym;
  m.noise_power = m.xr2 + m.yr2 + m.xm2 + m.ym2;
  m.receiver_output = m.noise_power + 2.0 * kSplitVacuum;
  m.measured_power = m.noise_power + 4.0 * kSplitVacuum;
  return m;
}

HypothesisMoments ideal_moments(const ProtocolParams& params, Hypothesis h, Brightness mode) {
  params.validate();
  const double g = params.resolved_gain();
  const double bath = params.bath_photons + 0.5;
  const double mem = params.memory_transmissivity * params.signal_photons + 0.5;
  double ret = bath;
  double c = 0.0;
  if (h == Hypothesis::H1) {
    c = cross_core(params);
    if (mode == Brightness::Exact)
      ret = params.eta * (params.signal_photons + 0.5) + (1.0 - params.eta) * bath;
  }
  // <X_R X_M> = +c, <Y_R Y_M> = -c
  return make_moments(h, g, ret, ret + 2.0 * g * c + g * g * mem,
                      mem + 2.0 * g * c + g * g * ret, mem);
}

HypothesisMoments moments_from_state(const GaussianState& joint_rm, Hypothesis h, double gain) {
  const GaussianState out = apply(cv_cnot(gain, "R", "M"), joint_rm);
  return make_moments(h, gain, out.variance("R", Quadrature::X), out.variance("R", Quadrature::Y),
                      out.variance("M", Quadrature::X), out.variance("M", Quadrature::Y));
}

MonteCarloMoments monte_carlo_moments(const ProtocolParams& params, Hypothesis h,
                                      std::size_t n_samples, std::uint64_t seed) {
  const double gain = params.resolved_gain();
  const SymplecticOp op = compose(cv_cnot(gain, "S", "I"), channel_op(params, h));
  const SampleBatch out = transform(op, sample(source_state(params), n_samples, seed));
  const EmpiricalMoments em = empirical_moments(out);
  const Eigen::Index idx[] = {0, 1, 2, 3};  // S -> R, I -> M
  MonteCarloMoments mc;
  mc.moments = make_moments(h, gain, em.second_moments(idx[0], idx[0]),
                            em.second_moments(idx[1], idx[1]), em.second_moments(idx[2], idx[2]),
                            em.second_moments(idx[3], idx[3]));
  for (std::size_t k = 0; k < 4; ++k)
    mc.standard_errors[k] = 0.5 * em.standard_errors(idx[k], idx[k]);
  return mc;
}

double effective_signal_power(const ProtocolParams& params) {
  params.validate();
  return 2.0 * params.resolved_gain() * cross_core(params);
}

double exact_signal_power(const ProtocolParams& params) {
  return ideal_moments(params, Hypothesis::H1).receiver_output -
         ideal_moments(params, Hypothesis::H0).receiver_output;
}

double low_brightness_correction(const ProtocolParams& params) {
  params.validate();
  const double g = params.resolved_gain();
  return (2.0 + g * g) * params.eta * (params.signal_photons - params.bath_photons) / 2.0;
}

double noise_power(const ProtocolParams& params) {
  params.validate();
  const double g = params.resolved_gain();
  return params.bath_photons * (1.0 + g * g / 2.0);
}

double nominal_added_photons(const ProtocolParams& params) {
  params.validate();
  const double g = params.resolved_gain();
  return params.bath_photons * (2.0 + g * g) + 4.0;
}

std::string to_string(const QuadratureRef& q) {
  return (q.quadrature == Quadrature::X ? "X_" : "Y_") + q.mode.name;
}

LinearForm& LinearForm::add(const QuadratureRef& q, double coefficient) {
  if (!std::isfinite(coefficient))
    throw std::domain_error("non-finite coefficient for " + to_string(q));
  for (auto& [ref, c] : terms_) {
    if (ref == q) {
      c += coefficient;
      return *this;
    }
  }
  terms_.emplace_back(q, coefficient);
  return *this;
}

double LinearForm::coefficient(const QuadratureRef& q) const {
  for (const auto& [ref, c] : terms_)
    if (ref == q) return c;
  return 0.0;
}

double LinearForm::variance(const GaussianState& state) const {
  double v = 0.0;
  for (const auto& [a, ca] : terms_) {
    const auto i = static_cast<Eigen::Index>(state.quadrature_index(a.mode, a.quadrature));
    for (const auto& [b, cb] : terms_) {
      const auto j = static_cast<Eigen::Index>(state.quadrature_index(b.mode, b.quadrature));
      v += ca * cb * state.cov()(i, j);
    }
  }
  return v;
}

double LinearForm::partial_variance(const GaussianState& state,
                                    const std::vector<QuadratureRef>& rows,
                                    const std::vector<QuadratureRef>& cols) const {
  double v = 0.0;
  for (const auto& [a, ca] : terms_) {
    if (!contains(rows, a)) continue;
    const auto i = static_cast<Eigen::Index>(state.quadrature_index(a.mode, a.quadrature));
    for (const auto& [b, cb] : terms_) {
      if (!contains(cols, b)) continue;
      const auto j = static_cast<Eigen::Index>(state.quadrature_index(b.mode, b.quadrature));
      v += ca * cb * state.cov()(i, j);
    }
  }
  return v;
}

double coefficient_distance(const LinearForm& a, const LinearForm& b) {
  double d = 0.0;
  for (const auto& [q, c] : a.terms()) d = std::max(d, std::abs(c - b.coefficient(q)));
  for (const auto& [q, c] : b.terms()) d = std::max(d, std::abs(c - a.coefficient(q)));
  return d;
}

std::array<LinearForm, 4> ideal_outputs(double gain) {
  std::array<LinearForm, 4> f{LinearForm("X_R"), LinearForm("Y_R"), LinearForm("X_M"),
                              LinearForm("Y_M")};
  f[0].add(xq("R"), 1.0);
  f[1].add(yq("R"), 1.0).add(yq("M"), -gain);
  f[2].add(xq("M"), 1.0).add(xq("R"), gain);
  f[3].add(yq("M"), 1.0);
  return f;
}

std::array<LinearForm, 4> practical_outputs(const ProtocolParams& params) {
  params.validate();
  const double g = params.resolved_g();
  const double gamma = params.homodyne_efficiency;
  const double gain = gain_from_g(g);
  const double a = std::sqrt((1.0 - g) / (1.0 + g));
  const double b = std::sqrt(g * (1.0 - g) / (1.0 + g));
  const double v = std::sqrt((1.0 - gamma) * (1.0 - g) / (gamma * g * (1.0 + g)));
  const double ea = std::exp(-params.squeezing_a);
  const double eb = std::exp(-params.squeezing_b);

  std::array<LinearForm, 4> f = ideal_outputs(gain);
  f[0].add(xq(pm::kAncillaB), a * eb).add(xq(pm::kVacXR), v);
  f[1].add(yq(pm::kAncillaA), b * ea).add(yq(pm::kVacYR), v);
  f[2].add(xq(pm::kAncillaB), -b * eb).add(xq(pm::kVacXM), v);
  f[3].add(yq(pm::kAncillaA), -b * ea).add(yq(pm::kVacYM), v);
  return f;
}

GaussianState practical_input_state(const ProtocolParams& params, Hypothesis h) {
  GaussianState s = joint_state(params, h);
  for (const ModeLabel& m :
       {pm::kAncillaA, pm::kAncillaB, pm::kVacXR, pm::kVacYR, pm::kVacXM, pm::kVacYM})
    s = tensor(s, make_vacuum(m));
  return s;
}

double NoiseBudget::total() const {
  double t = 0.0;
  for (const auto& e : entries) t += e.total;
  return t;
}

double NoiseBudget::bath_share() const {
  double b = 0.0;
  for (const auto& e : entries) b += e.bath;
  return b / total();
}

NoiseBudget practical_noise_budget(const ProtocolParams& params, Hypothesis h) {
  const std::array<LinearForm, 4> forms = practical_outputs(params);
  const GaussianState state = practical_input_state(params, h);
  const std::vector<QuadratureRef> ret{xq("R"), yq("R")};
  const std::vector<QuadratureRef> mem{xq("M"), yq("M")};
  const std::vector<QuadratureRef> anc{xq(pm::kAncillaA), yq(pm::kAncillaA), xq(pm::kAncillaB),
                                       yq(pm::kAncillaB)};
  std::vector<QuadratureRef> vac;
  for (const ModeLabel& m : {pm::kVacXR, pm::kVacYR, pm::kVacXM, pm::kVacYM}) {
    vac.push_back(xq(m));
    vac.push_back(yq(m));
  }

  NoiseBudget budget;
  budget.hypothesis = h;
  budget.gain = gain_from_g(params.resolved_g());
  double internal = 0.0;
  for (std::size_t k = 0; k < forms.size(); ++k) {
    const LinearForm& f = forms[k];
    BudgetEntry& e = budget.entries[k];
    e.quadrature = f.name();
    e.bath = 0.5 * f.partial_variance(state, ret, ret);
    e.memory = 0.5 * f.partial_variance(state, mem, mem);
    e.cross = 0.5 * (f.partial_variance(state, ret, mem) + f.partial_variance(state, mem, ret));
    e.ancilla = 0.5 * f.partial_variance(state, anc, anc);
    e.feedforward_vacuum = 0.5 * f.partial_variance(state, vac, vac);
    e.split_vacuum = kSplitVacuum;
    e.total = 0.5 * f.variance(state) + kSplitVacuum;
    internal += e.ancilla + e.feedforward_vacuum;
  }
  budget.internal_added_photons = internal / kSplitVacuum;
  return budget;
}

}  // namespace qisim
