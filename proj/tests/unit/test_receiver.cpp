#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "oracles/independent.hpp"
#include "qisim/receiver.hpp"

using namespace qisim;

namespace {

ProtocolParams with_gain(double g) {
  ProtocolParams p;
  p.gain = g;
  return p;
}

void expect_moments(const HypothesisMoments& m, double xr, double yr, double xm, double ym,
                    double i, double tol = 1e-12) {
  EXPECT_NEAR(m.xr2, xr, tol);
  EXPECT_NEAR(m.yr2, yr, tol);
  EXPECT_NEAR(m.xm2, xm, tol);
  EXPECT_NEAR(m.ym2, ym, tol);
  EXPECT_NEAR(m.receiver_output, i, tol);
}

}  // namespace

TEST(IdealMoments, ZeroGainValues) {
  expect_moments(ideal_moments(with_gain(0.0), Hypothesis::H1), 10.15005, 10.15005, 0.2535, 0.2535,
                 21.3071);
  expect_moments(ideal_moments(with_gain(0.0), Hypothesis::H0), 10.25, 10.25, 0.2535, 0.2535, 21.507);
}

TEST(IdealMoments, GainThreeValues) {
  expect_moments(ideal_moments(with_gain(3.0), Hypothesis::H1), 10.15005, 12.4567749876115,
                 91.6291749876115, 0.2535, 114.989499975223);
  expect_moments(ideal_moments(with_gain(3.0), Hypothesis::H0), 10.25, 12.5315, 92.5035, 0.2535,
                 116.0385);
}

TEST(IdealMoments, MeasuredPowerAddsEverySplitVacuum) {
  const HypothesisMoments m = ideal_moments(with_gain(6.0), Hypothesis::H1);
  EXPECT_NEAR(m.measured_power, m.noise_power + 1.0, 1e-12);
  EXPECT_NEAR(m.receiver_output, m.noise_power + 0.5, 1e-12);
}

TEST(IdealMoments, H0BathIsIsotropic) {
  const HypothesisMoments m = ideal_moments(with_gain(0.0), Hypothesis::H0);
  EXPECT_NEAR(m.xr2 * 4, m.yr2 * 4, 1e-12);
  const GaussianState s = joint_state(with_gain(3.0), Hypothesis::H0);
  EXPECT_NEAR(s.variance("R", Quadrature::X), s.variance("R", Quadrature::Y), 1e-12);
}

TEST(IdealMoments, UnaffectedQuadraturesIndependentOfGain) {
  for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
    const HypothesisMoments ref = ideal_moments(with_gain(0.0), h);
    for (double g : {0.5, 1.0, 3.0, 6.0}) {
      const HypothesisMoments m = ideal_moments(with_gain(g), h);
      EXPECT_DOUBLE_EQ(m.xr2, ref.xr2);
      EXPECT_DOUBLE_EQ(m.ym2, ref.ym2);
    }
  }
}

TEST(IdealMoments, MatchCovariancePropagation) {
  for (double g : {0.0, 1.0, 3.0, 6.0}) {
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
      const ProtocolParams p = with_gain(g);
      const HypothesisMoments a = ideal_moments(p, h);
      const HypothesisMoments b = moments_from_state(joint_state(p, h), h, g);
      expect_moments(b, a.xr2, a.yr2, a.xm2, a.ym2, a.receiver_output, 1e-11);
    }
  }
}

TEST(IdealMoments, MatchIndependentPhysicalChain) {
  for (double g : {1.0, 3.0}) {
    for (bool h1 : {true, false}) {
      oracle::ChainParams cp;
      cp.G = g;
      cp.h1 = h1;
      const auto mc = oracle::physical_chain(cp, 400'000, 77);
      const HypothesisMoments a = ideal_moments(with_gain(g), h1 ? Hypothesis::H1 : Hypothesis::H0);
      const double core[] = {a.var_xr, a.var_yr, a.var_xm, a.var_ym};
      for (int k = 0; k < 4; ++k)
        EXPECT_LT(std::abs(mc[k].value - core[k]) / mc[k].stderr_, 5.0) << "G=" << g << " k=" << k;
    }
  }
}

TEST(IdealMoments, CrossTermIdentity) {
  const double c = 0.00420416460191558;  // measured-power <X_M X_R>
  for (double g : {0.5, 1.0, 3.0, 6.0}) {
    const ProtocolParams p = with_gain(g);
    const HypothesisMoments h1 = ideal_moments(p, Hypothesis::H1, Brightness::LowBrightness);
    const HypothesisMoments h0 = ideal_moments(p, Hypothesis::H0, Brightness::LowBrightness);
    EXPECT_NEAR(h1.receiver_output - h0.receiver_output, 2 * g * c - 2 * g * (-c), 1e-12);
  }
}

TEST(SignalPower, EffectiveValues) {
  EXPECT_DOUBLE_EQ(effective_signal_power(with_gain(0.0)), 0.0);
  EXPECT_NEAR(effective_signal_power(with_gain(3.0)), 0.050449975222987, 1e-15);
  EXPECT_NEAR(effective_signal_power(with_gain(6.0)), 0.100899950445974, 1e-15);
}

TEST(SignalPower, ExactDiffersByLowBrightnessCorrection) {
  EXPECT_NEAR(exact_signal_power(with_gain(0.0)), -0.1999, 1e-12);
  EXPECT_NEAR(exact_signal_power(with_gain(3.0)), -1.04900002477701, 1e-12);
  for (double g : {0.0, 1.0, 3.0, 6.0}) {
    const ProtocolParams p = with_gain(g);
    EXPECT_NEAR(exact_signal_power(p), effective_signal_power(p) + low_brightness_correction(p), 1e-12);
  }
  ProtocolParams p = with_gain(3.0);
  p.eta = 0.0;
  EXPECT_DOUBLE_EQ(low_brightness_correction(p), 0.0);
  EXPECT_DOUBLE_EQ(exact_signal_power(p), 0.0);
}

TEST(SignalPower, ZeroGainDifferenceOnlyFromReturnVariance) {
  const ProtocolParams p = with_gain(0.0);
  const HypothesisMoments h1 = ideal_moments(p, Hypothesis::H1);
  const HypothesisMoments h0 = ideal_moments(p, Hypothesis::H0);
  EXPECT_DOUBLE_EQ(h1.xm2, h0.xm2);
  EXPECT_DOUBLE_EQ(h1.ym2, h0.ym2);
  EXPECT_NEAR(h1.xr2 - h0.xr2, p.eta * (p.signal_photons - p.bath_photons) / 2, 1e-14);
  EXPECT_NEAR(h1.receiver_output -
                  ideal_moments(p, Hypothesis::H1, Brightness::LowBrightness).receiver_output,
              exact_signal_power(p), 1e-12);
}

TEST(NoisePower, FormulaAndNominalFigures) {
  EXPECT_DOUBLE_EQ(noise_power(with_gain(0.0)), 20.0);
  EXPECT_DOUBLE_EQ(noise_power(with_gain(1.0)), 30.0);
  EXPECT_DOUBLE_EQ(noise_power(with_gain(1.5)), 42.5);
  EXPECT_DOUBLE_EQ(noise_power(with_gain(3.0)), 110.0);
  EXPECT_DOUBLE_EQ(noise_power(with_gain(6.0)), 380.0);
  EXPECT_DOUBLE_EQ(nominal_added_photons(with_gain(1.0)), 64.0);
  EXPECT_DOUBLE_EQ(nominal_added_photons(with_gain(3.0)), 224.0);
  EXPECT_DOUBLE_EQ(nominal_added_photons(with_gain(6.0)), 764.0);
}

TEST(LinearForm, VarianceAndCoefficients) {
  LinearForm f("f");
  f.add({"R", Quadrature::X}, 2.0).add({"M", Quadrature::X}, 1.0).add({"R", Quadrature::X}, 1.0);
  EXPECT_DOUBLE_EQ(f.coefficient({"R", Quadrature::X}), 3.0);
  EXPECT_DOUBLE_EQ(f.coefficient({"R", Quadrature::Y}), 0.0);
  const GaussianState s = make_tmsv(1.0, "R", "M");
  const double c = std::sqrt(2.0);
  EXPECT_NEAR(f.variance(s), 9 * 1.5 + 1.5 + 2 * 3 * c, 1e-12);
  EXPECT_THROW(f.variance(make_vacuum("R")), std::invalid_argument);
  EXPECT_THROW(f.add({"R", Quadrature::X}, std::numeric_limits<double>::infinity()),
               std::domain_error);
}

TEST(PracticalOutputs, CoefficientAtNominalSettings) {
  ProtocolParams p;
  p.beamsplitter_g = 0.09;
  const auto f = practical_outputs(p);
  EXPECT_NEAR(f[0].coefficient({practical_modes::kAncillaB, Quadrature::X}), 0.646089152254200, 1e-12);
  EXPECT_NEAR(f[2].coefficient({"R", Quadrature::X}), 3.03333333333333, 1e-12);
  EXPECT_NEAR(f[1].coefficient({"M", Quadrature::Y}), -3.03333333333333, 1e-12);
}

TEST(PracticalOutputs, UnitGIsIdentity) {
  ProtocolParams p;
  p.beamsplitter_g = 1.0;
  const auto f = practical_outputs(p);
  const auto id = ideal_outputs(0.0);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(coefficient_distance(f[k], id[k]), 0.0);
}

TEST(PracticalOutputs, ConvergeToIdealWithSqueezing) {
  ProtocolParams p;
  p.beamsplitter_g = 0.09;
  p.homodyne_efficiency = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (double r : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    p.squeezing_a = p.squeezing_b = r;
    const auto f = practical_outputs(p);
    const auto id = ideal_outputs(gain_from_g(0.09));
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d = std::max(d, coefficient_distance(f[k], id[k]));
    EXPECT_LT(d, last);
    last = d;
  }
  EXPECT_LT(last, 1e-4);
}

TEST(NoiseBudget, InternalNoiseNearTwoPhotons) {
  ProtocolParams p;
  p.beamsplitter_g = 0.09;
  const NoiseBudget b = practical_noise_budget(p, Hypothesis::H0);
  EXPECT_NEAR(b.internal_added_photons, 1.67771477663230, 1e-12);
  EXPECT_NEAR(b.internal_added_photons, 2.0, 0.5);
}

TEST(NoiseBudget, ContributionsSumToTotal) {
  for (double g : {0.09, 0.38, 0.7}) {
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::H1}) {
      ProtocolParams p;
      p.beamsplitter_g = g;
      const NoiseBudget b = practical_noise_budget(p, h);
      for (const auto& e : b.entries) EXPECT_NEAR(e.contributions_sum(), e.total, 1e-12) << e.quadrature;
    }
  }
}

TEST(NoiseBudget, IdealLimitHasNoInternalNoise) {
  ProtocolParams p;
  p.beamsplitter_g = 0.09;
  p.homodyne_efficiency = 1.0;
  p.squeezing_a = p.squeezing_b = 40.0;
  const NoiseBudget b = practical_noise_budget(p, Hypothesis::H1);
  for (const auto& e : b.entries) {
    EXPECT_LT(e.ancilla, 1e-30);
    EXPECT_EQ(e.feedforward_vacuum, 0.0);
  }
  const HypothesisMoments m = ideal_moments(p, Hypothesis::H1);
  EXPECT_NEAR(b.total(), m.measured_power, 1e-9);
}

TEST(NoiseBudget, BathDominatesAtGainThree) {
  ProtocolParams p;
  p.gain = 3.0;
  const NoiseBudget b = practical_noise_budget(p, Hypothesis::H0);
  EXPECT_NEAR(b.bath_share(), 0.964072216924839, 1e-12);
  EXPECT_GE(b.bath_share(), 0.95);
}

TEST(MonteCarloMoments, CommonRandomNumbersAcrossHypotheses) {
  const ProtocolParams p = with_gain(3.0);
  const MonteCarloMoments a = monte_carlo_moments(p, Hypothesis::H1, 200'000, 4);
  const MonteCarloMoments b = monte_carlo_moments(p, Hypothesis::H0, 200'000, 4);
  // Y_M never sees the return mode: identical draws give identical moments.
  EXPECT_DOUBLE_EQ(a.moments.ym2, b.moments.ym2);
  const HypothesisMoments ref = ideal_moments(p, Hypothesis::H1);
  const auto got = a.moments.measured();
  const auto want = ref.measured();
  for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(got[k] - want[k]) / a.standard_errors[k], 5.0);
}
