#include "qisim/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qisim/kernels.hpp"

namespace qisim {

namespace {

constexpr std::size_t kTrialBlock = std::size_t{1} << 16;
constexpr double kPhaseTolerance = 1e-9;

double wrapped_distance(double a, double b) {
  const double two_pi = 2.0 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), two_pi);
  return std::min(d, two_pi - d);
}

void check_lo(const LocalOscillator& lo, Quadrature q) {
  if (!(lo.amplitude > 0.0) || !std::isfinite(lo.amplitude))
    throw std::invalid_argument("local oscillator amplitude must be finite and > 0");
  const double expected = LocalOscillator::for_quadrature(1.0, q).phase;
  if (wrapped_distance(lo.phase, expected) > kPhaseTolerance)
    throw std::invalid_argument(std::string("LO phase does not select the ") +
                                (q == Quadrature::X ? "X (pi/2)" : "Y (pi)") + " quadrature");
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;

  double mean() const { return sum / static_cast<double>(n); }
  double variance() const {
    const double m = mean();
    return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
  }
};

Moments moments_of(std::span<const double> v) {
  Moments m;
  kernels::active().accumulate_moments(v.data(), v.size(), &m.sum, &m.sum_sq);
  m.n = v.size();
  return m;
}

// Normalised homodyne reading of one mode for every sample.
std::vector<double> normalized_readings(const SampleBatch& batch, const ModeLabel& mode,
                                        const LocalOscillator& lo) {
  const auto x = batch.column(mode, Quadrature::X);
  const auto y = batch.column(mode, Quadrature::Y);
  std::vector<double> current(batch.n_samples);
  kernels::active().photocurrent(x.data(), y.data(), batch.n_samples,
                                 lo.amplitude * std::cos(lo.phase),
                                 lo.amplitude * std::sin(lo.phase), current.data());
  const double scale = 1.0 / (lo.amplitude * std::numbers::sqrt2);
  for (auto& c : current) c *= scale;
  return current;
}

HomodyneRecord record_from(std::span<const double> normalized, double amplitude,
                           std::uint64_t seed) {
  const Moments m = moments_of(normalized);
  const double n = static_cast<double>(m.n);
  const double scale = amplitude * std::numbers::sqrt2;
  HomodyneRecord r;
  r.n_samples = m.n;
  r.seed = seed;
  r.normalized_quadrature_mean = m.mean();
  r.normalized_quadrature_variance = m.variance();
  r.normalized_mean_se = std::sqrt(r.normalized_quadrature_variance / n);
  r.normalized_variance_se = r.normalized_quadrature_variance * std::sqrt(2.0 / (n - 1.0));
  r.mean_current = scale * r.normalized_quadrature_mean;
  r.current_variance = scale * scale * r.normalized_quadrature_variance;
  r.mean_current_se = scale * r.normalized_mean_se;
  r.current_variance_se = scale * scale * r.normalized_variance_se;
  return r;
}

// Source modes plus the two split vacua.
GaussianState trial_state(const ProtocolParams& params) {
  return tensor(tensor(source_state(params), make_vacuum("vR")), make_vacuum("vM"));
}

// Channel (S -> R, I -> M), CNOT, and the two balanced splits.
SymplecticOp trial_op(const ProtocolParams& params, Hypothesis h, Brightness mode) {
  SymplecticOp op = channel_op(params, h);
  if (h == Hypothesis::H1 && mode == Brightness::LowBrightness) {
    if (params.eta >= 1.0)
      throw std::domain_error("low-brightness statistic needs eta < 1");
    const double bath = params.bath_photons + 0.5;
    const double target = (bath - params.eta * (params.signal_photons + 0.5)) / (1.0 - params.eta);
    if (!(target > 0.0)) throw std::domain_error("low-brightness bath level is not positive");
    Matrix k = std::sqrt(target / bath) * Matrix::Identity(2, 2);
    op = compose(op, SymplecticOp({"B"}, std::move(k)));
  }
  op = compose(cv_cnot(params.resolved_gain(), "S", "I"), op);
  op = compose(beamsplitter(0.5, "S", "vR"), op);
  op = compose(beamsplitter(0.5, "I", "vM"), op);
  return op;
}

struct ReadOut {
  ModeLabel mode;
  Quadrature quadrature;
};

const ReadOut kReadOuts[] = {
    {"S", Quadrature::X}, {"vR", Quadrature::Y}, {"I", Quadrature::X}, {"vM", Quadrature::Y}};

void accumulate_statistic(const SampleBatch& out, double lo_amplitude, double* acc) {
  for (const auto& r : kReadOuts) {
    const auto v = normalized_readings(out, r.mode,
                                       LocalOscillator::for_quadrature(lo_amplitude, r.quadrature));
    kernels::active().accumulate_squares(v.data(), v.size(), acc);
  }
}

DecisionStatistic finish(Hypothesis h, std::size_t n, std::uint64_t seed, const Moments& m) {
  DecisionStatistic s;
  s.hypothesis = h;
  s.n_trials = n;
  s.seed = seed;
  s.mean = m.mean();
  s.variance = m.variance();
  s.mean_se = std::sqrt(s.variance / static_cast<double>(n));
  return s;
}

void check_trials(std::size_t n_trials) {
  if (n_trials < 2) throw std::invalid_argument("n_trials must be >= 2");
}

}  // namespace

HomodyneRecord simulate_homodyne(const GaussianState& state, const ModeLabel& mode,
                                 const LocalOscillator& lo, Quadrature quadrature,
                                 std::size_t n_samples, std::uint64_t seed) {
  check_lo(lo, quadrature);
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
  const ModeLabel keep[] = {mode};
  const SampleBatch batch = sample(state.marginal(keep), n_samples, seed);
  return record_from(normalized_readings(batch, mode, lo), lo.amplitude, seed);
}

SplitRecord split_and_measure(const GaussianState& state, const ModeLabel& mode,
                              double lo_amplitude, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
  const ModeLabel keep[] = {mode};
  const ModeLabel vac = mode.name + "_split";
  const GaussianState in = tensor(state.marginal(keep), make_vacuum(vac));
  const SampleBatch batch = transform(beamsplitter(0.5, mode, vac), sample(in, n_samples, seed));

  const auto lx = LocalOscillator::for_quadrature(lo_amplitude, Quadrature::X);
  const auto ly = LocalOscillator::for_quadrature(lo_amplitude, Quadrature::Y);
  const std::vector<double> xs = normalized_readings(batch, mode, lx);
  const std::vector<double> ys = normalized_readings(batch, vac, ly);

  SplitRecord out;
  out.x = record_from(xs, lo_amplitude, seed);
  out.y = record_from(ys, lo_amplitude, seed);
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += xs[i] * ys[i];
  const double n = static_cast<double>(n_samples);
  const double cov = (sxy - n * out.x.normalized_quadrature_mean * out.y.normalized_quadrature_mean) /
                     (n - 1.0);
  out.correlation = cov / std::sqrt(out.x.normalized_quadrature_variance *
                                    out.y.normalized_quadrature_variance);
  out.correlation_se = (1.0 - out.correlation * out.correlation) / std::sqrt(n - 1.0);
  return out;
}

DecisionStatistic receiver_decision_statistic(const ProtocolParams& params, Hypothesis h,
                                              std::size_t n_trials, std::uint64_t seed,
                                              const DecisionOptions& options) {
  check_trials(n_trials);
  const GaussianState state = trial_state(params);
  const SymplecticOp op = trial_op(params, h, options.mode);
  Moments m;
  for (std::size_t begin = 0, b = 0; begin < n_trials; begin += kTrialBlock, ++b) {
    const std::size_t len = std::min(kTrialBlock, n_trials - begin);
    const SampleBatch out = transform(op, sample(state, len, seed + b));
    std::vector<double> stat(len, 0.0);
    accumulate_statistic(out, options.lo_amplitude, stat.data());
    kernels::active().accumulate_moments(stat.data(), len, &m.sum, &m.sum_sq);
  }
  m.n = n_trials;
  return finish(h, n_trials, seed, m);
}

PairedStatistic paired_decision_statistic(const ProtocolParams& params, std::size_t n_trials,
                                          std::uint64_t seed, const DecisionOptions& options) {
  check_trials(n_trials);
  const GaussianState state = trial_state(params);
  const SymplecticOp op1 = trial_op(params, Hypothesis::H1, options.mode);
  const SymplecticOp op0 = trial_op(params, Hypothesis::H0, options.mode);
  Moments m1, m0, md;
  for (std::size_t begin = 0, b = 0; begin < n_trials; begin += kTrialBlock, ++b) {
    const std::size_t len = std::min(kTrialBlock, n_trials - begin);
    const SampleBatch pre = sample(state, len, seed + b);
    std::vector<double> s1(len, 0.0), s0(len, 0.0);
    accumulate_statistic(transform(op1, pre), options.lo_amplitude, s1.data());
    accumulate_statistic(transform(op0, pre), options.lo_amplitude, s0.data());
    const auto& k = kernels::active();
    k.accumulate_moments(s1.data(), len, &m1.sum, &m1.sum_sq);
    k.accumulate_moments(s0.data(), len, &m0.sum, &m0.sum_sq);
    for (std::size_t i = 0; i < len; ++i) s1[i] -= s0[i];
    k.accumulate_moments(s1.data(), len, &md.sum, &md.sum_sq);
  }
  m1.n = m0.n = md.n = n_trials;
  PairedStatistic p;
  p.h1 = finish(Hypothesis::H1, n_trials, seed, m1);
  p.h0 = finish(Hypothesis::H0, n_trials, seed, m0);
  p.mean_difference = md.mean();
  p.difference_se = std::sqrt(md.variance() / static_cast<double>(n_trials));
  return p;
}

double decision_statistic_variance(const ProtocolParams& params, Hypothesis h, Brightness mode) {
  const GaussianState out = apply(trial_op(params, h, mode), trial_state(params));
  std::vector<Eigen::Index> idx;
  for (const auto& r : kReadOuts)
    idx.push_back(static_cast<Eigen::Index>(out.quadrature_index(r.mode, r.quadrature)));
  Matrix c(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      c(i, j) = out.cov()(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return 2.0 * (c * c).trace();
}

}  // namespace qisim
