#pragma once

// Zero-mean Gaussian states over labelled bosonic modes.
//
// Quadratures are ordered (X_1, Y_1, X_2, Y_2, ...) with X = (a + a^dag)/sqrt(2),
// Y = -i (a - a^dag)/sqrt(2), hbar = 1, so the vacuum has variance 1/2 in each
// quadrature. The symplectic form is Omega = diag([[0, 1], [-1, 0]], ...).

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qisim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ModeLabel {
  std::string name;

  ModeLabel() = default;
  ModeLabel(std::string n) : name(std::move(n)) {}
  ModeLabel(const char* n) : name(n) {}

  auto operator<=>(const ModeLabel&) const = default;
};

enum class Quadrature { X, Y };

enum class SqueezeAxis {
  Position,  // X variance reduced: diag(e^{-r}, e^{+r})
  Momentum,  // Y variance reduced: diag(e^{+r}, e^{-r})
};

inline constexpr double kVacuumVariance = 0.5;
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kUncertaintySlack = 1e-9;

Matrix symplectic_form(std::size_t num_modes);

class GaussianState {
 public:
  // Throws std::invalid_argument on shape/label problems and std::domain_error
  // when the covariance is asymmetric or violates the uncertainty relation.
  GaussianState(std::vector<ModeLabel> modes, Matrix cov);
  GaussianState(std::vector<ModeLabel> modes, Matrix cov, Vector mean);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  std::size_t num_modes() const { return modes_.size(); }
  std::size_t dim() const { return 2 * modes_.size(); }
  const Matrix& cov() const { return cov_; }
  const Vector& mean() const { return mean_; }

  bool has_mode(const ModeLabel& m) const;
  std::size_t index_of(const ModeLabel& m) const;
  std::size_t quadrature_index(const ModeLabel& m, Quadrature q) const;

  double covariance(const ModeLabel& a, Quadrature qa, const ModeLabel& b,
                    Quadrature qb) const;
  double variance(const ModeLabel& m, Quadrature q) const {
    return covariance(m, q, m, q);
  }

  // Partial trace: keeps the listed modes in the listed order.
  GaussianState marginal(std::span<const ModeLabel> keep) const;
  GaussianState relabeled(const ModeLabel& from, const ModeLabel& to) const;

  // Ascending, one value per mode.
  Vector symplectic_eigenvalues() const;

 private:
  std::vector<ModeLabel> modes_;
  Matrix cov_;
  Vector mean_;
};

// Direct sum of independent states; labels must not collide.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

GaussianState make_vacuum(const ModeLabel& mode);
GaussianState make_thermal(double mean_photons, const ModeLabel& mode = "B");
GaussianState make_tmsv(double mean_photons, const ModeLabel& signal = "S",
                        const ModeLabel& idler = "I");

// Linear quadrature map on a subset of modes, sigma -> S sigma S^T + N.
class SymplecticOp {
 public:
  SymplecticOp(std::vector<ModeLabel> modes, Matrix matrix,
               std::optional<Matrix> noise = std::nullopt);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  const Matrix& matrix() const { return matrix_; }
  const std::optional<Matrix>& noise() const { return noise_; }

  // max |S Omega S^T - Omega|
  double symplectic_defect() const;
  SymplecticOp inverse() const;

  // Full 2n x 2n matrix over `order`, identity on modes the op does not touch.
  Matrix embedded(std::span<const ModeLabel> order) const;
  Matrix embedded_noise(std::span<const ModeLabel> order) const;

 private:
  std::vector<ModeLabel> modes_;
  Matrix matrix_;
  std::optional<Matrix> noise_;
};

// `second` after `first`.
SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first);

// a' = sqrt(t) a + sqrt(1-t) b, b' = -sqrt(1-t) a + sqrt(t) b
SymplecticOp beamsplitter(double transmissivity, const ModeLabel& a,
                          const ModeLabel& b);
SymplecticOp single_mode_squeezer(double r, SqueezeAxis axis, const ModeLabel& mode);
// X_R' = X_R, Y_R' = Y_R - G Y_M, X_M' = X_M + G X_R, Y_M' = Y_M
SymplecticOp cv_cnot(double gain, const ModeLabel& control, const ModeLabel& target);
// Pure-loss/thermal-noise channel sigma -> t sigma + (1-t)(N+1/2) I on one mode.
SymplecticOp thermal_loss(double transmissivity, double env_photons,
                          const ModeLabel& mode);

GaussianState apply(const SymplecticOp& op, const GaussianState& state);

// n_samples x 2n draws, stored column-major by quadrature.
struct SampleBatch {
  std::vector<ModeLabel> modes;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> data;

  std::size_t dims() const { return 2 * modes.size(); }
  std::span<const double> column(std::size_t j) const {
    return {data.data() + j * n_samples, n_samples};
  }
  std::span<const double> column(const ModeLabel& m, Quadrature q) const;
};

// Chunked draws: chunk c uses an mt19937_64 seeded from (seed, c), so the
// batch is independent of the worker count.
SampleBatch sample(const GaussianState& state, std::size_t n_samples,
                   std::uint64_t seed);

// Applies a noise-free op to every sample.
SampleBatch transform(const SymplecticOp& op, const SampleBatch& batch);

struct EmpiricalMoments {
  Matrix second_moments;  // about the known zero mean
  Matrix standard_errors; // Gaussian estimator: sqrt((s_jj s_kk + s_jk^2)/n)
};
EmpiricalMoments empirical_moments(const SampleBatch& batch);

// Symmetric square root of a PSD matrix (eigen route); throws on negative
// eigenvalues beyond roundoff.
Matrix symmetric_sqrt(const Matrix& m);

}  // namespace qisim
