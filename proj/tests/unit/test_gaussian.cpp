#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"
#include "oracles/independent.hpp"
#include "qisim/gaussian.hpp"

using namespace qisim;

namespace {

constexpr double kTight = 1e-12;

void expect_matrix_near(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a =\n" << a << "\nb =\n" << b;
}

double z_score(double value, double expected, double se) { return (value - expected) / se; }

}  // namespace

TEST(GaussianState, RejectsAsymmetricCovariance) {
  Matrix c = 0.5 * Matrix::Identity(2, 2);
  c(0, 1) = 1e-6;
  EXPECT_THROW(GaussianState({"A"}, c), std::domain_error);
}

TEST(GaussianState, RejectsUncertaintyViolation) {
  Matrix c = Matrix::Identity(2, 2);
  c(0, 0) = 0.1;
  c(1, 1) = 0.1;
  EXPECT_THROW(GaussianState({"A"}, c), std::domain_error);
  c(0, 0) = 0.2;
  c(1, 1) = 2.0;  // product 0.4 >= 1/4, still physical
  EXPECT_NO_THROW(GaussianState({"A"}, c));
}

TEST(GaussianState, RejectsShapeAndLabelProblems) {
  EXPECT_THROW(GaussianState({"A"}, Matrix::Identity(4, 4)), std::invalid_argument);
  EXPECT_THROW(GaussianState({"A", "A"}, Matrix::Identity(4, 4)), std::invalid_argument);
  EXPECT_THROW(tensor(make_vacuum("A"), make_vacuum("A")), std::invalid_argument);
  EXPECT_THROW(make_vacuum("A").variance("B", Quadrature::X), std::invalid_argument);
}

TEST(Constructors, VacuumAndThermal) {
  expect_matrix_near(make_vacuum("V").cov(), 0.5 * Matrix::Identity(2, 2), 0.0);
  expect_matrix_near(make_thermal(0.0).cov(), 0.5 * Matrix::Identity(2, 2), 0.0);
  const GaussianState bath = make_thermal(20.0);
  expect_matrix_near(bath.cov(), 20.5 * Matrix::Identity(2, 2), 0.0);
  EXPECT_NEAR(bath.symplectic_eigenvalues()(0), 20.5, 1e-12);
  EXPECT_NEAR(oracle::symplectic_eigenvalues(bath.cov())[0], 20.5, 1e-12);
  EXPECT_THROW(make_thermal(-1.0), std::domain_error);
}

TEST(Constructors, TmsvEntries) {
  expect_matrix_near(make_tmsv(0.0).cov(), 0.5 * Matrix::Identity(4, 4), 0.0);
  const GaussianState s = make_tmsv(0.01);
  EXPECT_DOUBLE_EQ(s.variance("S", Quadrature::X), 0.51);
  EXPECT_DOUBLE_EQ(s.variance("I", Quadrature::Y), 0.51);
  EXPECT_NEAR(s.covariance("S", Quadrature::X, "I", Quadrature::X), 0.100498756211209, 1e-15);
  EXPECT_NEAR(s.covariance("S", Quadrature::Y, "I", Quadrature::Y), -0.100498756211209, 1e-15);
  EXPECT_DOUBLE_EQ(s.covariance("S", Quadrature::X, "I", Quadrature::Y), 0.0);
  EXPECT_THROW(make_tmsv(-0.1), std::domain_error);
}

TEST(Constructors, TmsvIsPureForAnyBrightness) {
  for (double n : {0.0, 0.01, 0.5, 3.0, 100.0}) {
    const GaussianState s = make_tmsv(n);
    for (double nu : oracle::symplectic_eigenvalues(s.cov())) EXPECT_NEAR(nu, 0.5, 1e-9) << n;
    const Vector nu = s.symplectic_eigenvalues();
    EXPECT_NEAR(nu(0), 0.5, 1e-9);
    EXPECT_NEAR(nu(1), 0.5, 1e-9);
  }
}

TEST(Constructors, TmsvMarginalIsThermal) {
  for (double n : {0.01, 1.0, 7.5}) {
    const GaussianState s = make_tmsv(n);
    const ModeLabel sig[] = {"S"};
    const ModeLabel idl[] = {"I"};
    expect_matrix_near(s.marginal(sig).cov(), make_thermal(n).cov(), 0.0);
    expect_matrix_near(s.marginal(idl).cov(), make_thermal(n).cov(), 0.0);
  }
}

TEST(SymplecticOps, BeamsplitterProperties) {
  expect_matrix_near(beamsplitter(1.0, "a", "b").matrix(), Matrix::Identity(4, 4), 0.0);
  EXPECT_LT(beamsplitter(0.38, "a", "b").symplectic_defect(), kTight);
  // Balanced splitter followed by its sign-flipped partner is the identity.
  const SymplecticOp half = beamsplitter(0.5, "a", "b");
  const SymplecticOp back = compose(half.inverse(), half);
  expect_matrix_near(back.matrix(), Matrix::Identity(4, 4), kTight);
  EXPECT_THROW(beamsplitter(1.5, "a", "b"), std::domain_error);
  EXPECT_THROW(beamsplitter(0.5, "a", "a"), std::invalid_argument);
}

TEST(SymplecticOps, SqueezerHalvesVariance) {
  const double r = std::log(2.0) / 2.0;
  const GaussianState y = apply(single_mode_squeezer(r, SqueezeAxis::Momentum, "A"), make_vacuum("A"));
  EXPECT_NEAR(y.variance("A", Quadrature::Y), 0.25, 1e-15);
  EXPECT_NEAR(y.variance("A", Quadrature::X), 1.0, 1e-15);
  const GaussianState x = apply(single_mode_squeezer(r, SqueezeAxis::Position, "A"), make_vacuum("A"));
  EXPECT_NEAR(x.variance("A", Quadrature::X), 0.25, 1e-15);
  EXPECT_LT(single_mode_squeezer(1.0, SqueezeAxis::Position, "A").symplectic_defect(), kTight);
  expect_matrix_near(single_mode_squeezer(0.0, SqueezeAxis::Momentum, "A").matrix(),
                     Matrix::Identity(2, 2), 0.0);
  EXPECT_THROW(single_mode_squeezer(-0.1, SqueezeAxis::Momentum, "A"), std::domain_error);
}

TEST(SymplecticOps, CnotOnVacua) {
  const GaussianState in = tensor(make_vacuum("R"), make_vacuum("M"));
  const GaussianState out = apply(cv_cnot(1.0, "R", "M"), in);
  EXPECT_DOUBLE_EQ(out.variance("R", Quadrature::Y), 1.0);
  EXPECT_DOUBLE_EQ(out.variance("M", Quadrature::X), 1.0);
  EXPECT_DOUBLE_EQ(out.covariance("R", Quadrature::Y, "M", Quadrature::Y), -0.5);
  EXPECT_DOUBLE_EQ(out.covariance("M", Quadrature::X, "R", Quadrature::X), 0.5);
  expect_matrix_near(cv_cnot(0.0, "R", "M").matrix(), Matrix::Identity(4, 4), 0.0);
  EXPECT_THROW(cv_cnot(-1.0, "R", "M"), std::domain_error);
}

TEST(SymplecticOps, CnotIsSymplecticAndAdditive) {
  for (double g : {0.0, 0.5, 1.0, 3.0, 6.0, 10.0}) {
    EXPECT_LT(cv_cnot(g, "R", "M").symplectic_defect(), kTight) << g;
    EXPECT_NEAR(cv_cnot(g, "R", "M").matrix().determinant(), 1.0, 1e-12);
  }
  for (double g1 : {0.3, 1.0, 2.5})
    for (double g2 : {0.7, 1.5, 4.0})
      expect_matrix_near(compose(cv_cnot(g1, "R", "M"), cv_cnot(g2, "R", "M")).matrix(),
                         cv_cnot(g1 + g2, "R", "M").matrix(), kTight);
}

TEST(SymplecticOps, InverseRestoresState) {
  const GaussianState s = tensor(make_tmsv(0.3, "R", "M"), make_thermal(2.0, "B"));
  const SymplecticOp op = cv_cnot(3.0, "R", "M");
  const GaussianState back = apply(op.inverse(), apply(op, s));
  expect_matrix_near(back.cov(), s.cov(), 1e-10);
  EXPECT_THROW(thermal_loss(0.5, 1.0, "B").inverse(), std::logic_error);
}

TEST(SymplecticOps, EmbeddingActsAsIdentityElsewhere) {
  const ModeLabel order[] = {"X", "a", "Y", "b"};
  const Matrix full = beamsplitter(0.3, "a", "b").embedded(order);
  EXPECT_DOUBLE_EQ(full(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(full(4, 4), 1.0);
  EXPECT_NEAR(full(2, 6), std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(full(6, 2), -std::sqrt(0.7), 1e-15);
}

TEST(SymplecticOps, NoiseValidation) {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = -1.0;
  EXPECT_THROW(SymplecticOp({"A"}, Matrix::Identity(2, 2), bad), std::domain_error);
  EXPECT_THROW(SymplecticOp({"A"}, Matrix::Identity(4, 4)), std::invalid_argument);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  const GaussianState s = make_tmsv(0.2);
  expect_matrix_near(apply(SymplecticOp({"S"}, Matrix::Identity(2, 2)), s).cov(), s.cov(), 0.0);
  EXPECT_THROW(apply(cv_cnot(1.0, "R", "M"), s), std::invalid_argument);
}

TEST(Apply, ThermalLossMatchesBeamsplitterMarginal) {
  const GaussianState s = make_thermal(0.4, "S");
  const GaussianState via_loss = apply(thermal_loss(0.3, 20.0, "S"), s);
  const GaussianState via_bs = apply(beamsplitter(0.3, "S", "B"), tensor(s, make_thermal(20.0, "B")));
  const ModeLabel keep[] = {"S"};
  expect_matrix_near(via_loss.cov(), via_bs.marginal(keep).cov(), 1e-12);
}

TEST(Apply, ReturnVarianceAfterChannelBeamsplitter) {
  const double eta = 0.01, ns = 0.01, nb = 20.0;
  const GaussianState in = tensor(make_tmsv(ns), make_thermal(nb, "B"));
  const GaussianState out = apply(beamsplitter(eta, "S", "B"), in);
  const double expected = (eta * (1 + 2 * ns) + (1 - eta) * (1 + 2 * nb)) / 4 * 2;
  EXPECT_NEAR(out.variance("S", Quadrature::X), expected, 1e-12);
  const SampleBatch b = sample(in, 1'000'000, 11);
  const EmpiricalMoments m = empirical_moments(transform(beamsplitter(eta, "S", "B"), b));
  EXPECT_LT(std::abs(z_score(m.second_moments(0, 0), expected, m.standard_errors(0, 0))), 5.0);
}

TEST(Sampling, VacuumVariance) {
  const EmpiricalMoments m = empirical_moments(sample(make_vacuum("V"), 1'000'000, 1));
  EXPECT_NEAR(m.second_moments(0, 0), 0.5, 0.005);
  EXPECT_NEAR(m.second_moments(1, 1), 0.5, 0.005);
}

TEST(Sampling, TmsvCrossCorrelation) {
  const EmpiricalMoments m = empirical_moments(sample(make_tmsv(0.01), 1'000'000, 2));
  EXPECT_LT(std::abs(z_score(m.second_moments(0, 2), 0.100498756211209, m.standard_errors(0, 2))), 5.0);
  EXPECT_LT(std::abs(z_score(m.second_moments(1, 3), -0.100498756211209, m.standard_errors(1, 3))), 5.0);
}

TEST(Sampling, DeterministicPerSeed) {
  const GaussianState s = tensor(make_tmsv(0.5), make_thermal(3.0));
  const SampleBatch a = sample(s, 50'001, 99);
  const SampleBatch b = sample(s, 50'001, 99);
  EXPECT_EQ(a.data, b.data);
  const SampleBatch c = sample(s, 50'001, 100);
  EXPECT_NE(a.data, c.data);
}

TEST(Sampling, IndependentOfWorkerCount) {
  const GaussianState s = make_tmsv(1.0);
  setenv("QISIM_WORKERS", "1", 1);
  const SampleBatch one = sample(s, 70'000, 5);
  setenv("QISIM_WORKERS", "3", 1);
  const SampleBatch three = sample(s, 70'000, 5);
  unsetenv("QISIM_WORKERS");
  EXPECT_EQ(one.data, three.data);
}

TEST(Sampling, EmpiricalCovarianceWithinFiveSigma) {
  GaussianState s = tensor(tensor(make_tmsv(0.7, "S", "I"), make_thermal(4.0, "B")), make_vacuum("V"));
  s = apply(beamsplitter(0.2, "S", "B"), s);
  s = apply(single_mode_squeezer(0.4, SqueezeAxis::Position, "V"), s);
  s = apply(cv_cnot(2.0, "S", "I"), s);
  const EmpiricalMoments m = empirical_moments(sample(s, 1'000'000, 21));
  for (Eigen::Index j = 0; j < s.cov().rows(); ++j)
    for (Eigen::Index k = 0; k < s.cov().cols(); ++k)
      EXPECT_LT(std::abs(z_score(m.second_moments(j, k), s.cov()(j, k), m.standard_errors(j, k))), 5.0)
          << j << "," << k;
}

TEST(Sampling, RejectsZeroSamples) { EXPECT_THROW(sample(make_vacuum("V"), 0, 1), std::invalid_argument); }

TEST(SymplecticSpectrum, AgreesWithComplexEigensolver) {
  GaussianState s = tensor(make_tmsv(0.3, "S", "I"), make_thermal(2.0, "B"));
  s = apply(beamsplitter(0.6, "S", "B"), s);
  s = apply(cv_cnot(1.7, "I", "B"), s);
  const std::vector<double> ref = oracle::symplectic_eigenvalues(s.cov());
  const Vector nu = s.symplectic_eigenvalues();
  ASSERT_EQ(ref.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(nu(static_cast<Eigen::Index>(k)), ref[k], 1e-9);
}

TEST(SymmetricSqrt, SquaresBack) {
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  const Matrix r = symmetric_sqrt(a);
  expect_matrix_near(r * r, a, 1e-12);
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  EXPECT_THROW(symmetric_sqrt(bad), std::domain_error);
}
