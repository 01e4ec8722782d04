#include "qisim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qisim/kernels.hpp"
#include "qisim/parallel.hpp"

namespace qisim {

namespace {

constexpr std::size_t kSampleChunk = std::size_t{1} << 14;

std::size_t find_mode(const std::vector<ModeLabel>& modes, const ModeLabel& m) {
  const auto it = std::find(modes.begin(), modes.end(), m);
  if (it == modes.end()) throw std::invalid_argument("unknown mode '" + m.name + "'");
  return static_cast<std::size_t>(it - modes.begin());
}

void require_unique(const std::vector<ModeLabel>& modes) {
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j])
        throw std::invalid_argument("duplicate mode label '" + modes[i].name + "'");
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Vector symplectic_spectrum(const Matrix& cov) {
  const std::size_t n = static_cast<std::size_t>(cov.rows()) / 2;
  const Matrix root = symmetric_sqrt(cov);
  const Matrix a = root * symplectic_form(n) * root;
  // a is antisymmetric with eigenvalues +-i nu; a^T a has nu^2 twice.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a);
  Vector nu2 = es.eigenvalues();
  Vector out(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double v = 0.5 * (nu2(2 * k) + nu2(2 * k + 1));
    out(static_cast<Eigen::Index>(k)) = std::sqrt(std::max(v, 0.0));
  }
  return out;
}

}  // namespace

Matrix symplectic_form(std::size_t num_modes) {
  Matrix omega = Matrix::Zero(2 * num_modes, 2 * num_modes);
  for (std::size_t k = 0; k < num_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Matrix symmetric_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m));
  Vector ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-12 * scale)
      throw std::domain_error("matrix is not positive semidefinite (eigenvalue " +
                              std::to_string(ev(i)) + ")");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

GaussianState::GaussianState(std::vector<ModeLabel> modes, Matrix cov)
    : GaussianState(std::move(modes), std::move(cov), Vector()) {}

GaussianState::GaussianState(std::vector<ModeLabel> modes, Matrix cov, Vector mean)
    : modes_(std::move(modes)), cov_(std::move(cov)), mean_(std::move(mean)) {
  if (modes_.empty()) throw std::invalid_argument("a Gaussian state needs at least one mode");
  require_unique(modes_);
  const auto d = static_cast<Eigen::Index>(2 * modes_.size());
  if (cov_.rows() != d || cov_.cols() != d)
    throw std::invalid_argument("covariance must be 2n x 2n for n modes");
  if (mean_.size() == 0) mean_ = Vector::Zero(d);
  if (mean_.size() != d) throw std::invalid_argument("mean must have length 2n");
  if (!cov_.allFinite()) throw std::domain_error("covariance has non-finite entries");

  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw std::domain_error("covariance is not symmetric");
  cov_ = symmetrized(cov_);

  Eigen::SelfAdjointEigenSolver<Matrix> es(cov_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("covariance is not positive definite");
  const Vector nu = symplectic_spectrum(cov_);
  if (nu.minCoeff() < kVacuumVariance - kUncertaintySlack)
    throw std::domain_error("covariance violates the uncertainty relation (symplectic eigenvalue " +
                            std::to_string(nu.minCoeff()) + ")");
}

bool GaussianState::has_mode(const ModeLabel& m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t GaussianState::index_of(const ModeLabel& m) const { return find_mode(modes_, m); }

std::size_t GaussianState::quadrature_index(const ModeLabel& m, Quadrature q) const {
  return 2 * index_of(m) + (q == Quadrature::Y ? 1 : 0);
}

double GaussianState::covariance(const ModeLabel& a, Quadrature qa, const ModeLabel& b,
                                 Quadrature qb) const {
  return cov_(static_cast<Eigen::Index>(quadrature_index(a, qa)),
              static_cast<Eigen::Index>(quadrature_index(b, qb)));
}

GaussianState GaussianState::marginal(std::span<const ModeLabel> keep) const {
  std::vector<ModeLabel> labels(keep.begin(), keep.end());
  std::vector<Eigen::Index> idx;
  for (const auto& m : labels) {
    const auto k = static_cast<Eigen::Index>(index_of(m));
    idx.push_back(2 * k);
    idx.push_back(2 * k + 1);
  }
  const auto d = static_cast<Eigen::Index>(idx.size());
  Matrix cov(d, d);
  Vector mean(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    mean(i) = mean_(idx[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < d; ++j)
      cov(i, j) = cov_(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  return GaussianState(std::move(labels), std::move(cov), std::move(mean));
}

GaussianState GaussianState::relabeled(const ModeLabel& from, const ModeLabel& to) const {
  std::vector<ModeLabel> labels = modes_;
  labels[index_of(from)] = to;
  return GaussianState(std::move(labels), cov_, mean_);
}

Vector GaussianState::symplectic_eigenvalues() const { return symplectic_spectrum(cov_); }

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  std::vector<ModeLabel> labels = a.modes();
  labels.insert(labels.end(), b.modes().begin(), b.modes().end());
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  Matrix cov = Matrix::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  Vector mean(da + db);
  mean << a.mean(), b.mean();
  return GaussianState(std::move(labels), std::move(cov), std::move(mean));
}

GaussianState make_vacuum(const ModeLabel& mode) {
  return GaussianState({mode}, kVacuumVariance * Matrix::Identity(2, 2));
}

GaussianState make_thermal(double mean_photons, const ModeLabel& mode) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
    throw std::domain_error("thermal mean photon number must be finite and >= 0");
  return GaussianState({mode}, (mean_photons + 0.5) * Matrix::Identity(2, 2));
}

GaussianState make_tmsv(double mean_photons, const ModeLabel& signal, const ModeLabel& idler) {
  if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
    throw std::domain_error("TMSV mean photon number must be finite and >= 0");
  const double diag = mean_photons + 0.5;
  const double c = std::sqrt(mean_photons * (mean_photons + 1.0));
  Matrix cov = diag * Matrix::Identity(4, 4);
  // <X_S X_I> = +c, <Y_S Y_I> = -c (squeezing phase 0)
  cov(0, 2) = cov(2, 0) = c;
  cov(1, 3) = cov(3, 1) = -c;
  return GaussianState({signal, idler}, std::move(cov));
}

SymplecticOp::SymplecticOp(std::vector<ModeLabel> modes, Matrix matrix,
                           std::optional<Matrix> noise)
    : modes_(std::move(modes)), matrix_(std::move(matrix)), noise_(std::move(noise)) {
  require_unique(modes_);
  const auto d = static_cast<Eigen::Index>(2 * modes_.size());
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw std::invalid_argument("symplectic op matrix must be 2n x 2n");
  if (noise_) {
    if (noise_->rows() != d || noise_->cols() != d)
      throw std::invalid_argument("noise matrix must be 2n x 2n");
    if ((*noise_ - noise_->transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance)
      throw std::domain_error("noise matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(*noise_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw std::domain_error("noise matrix is not positive semidefinite");
  }
}

double SymplecticOp::symplectic_defect() const {
  const Matrix omega = symplectic_form(modes_.size());
  return (matrix_ * omega * matrix_.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticOp SymplecticOp::inverse() const {
  if (noise_) throw std::logic_error("a noisy Gaussian channel has no inverse");
  // S^-1 = -Omega S^T Omega for symplectic S
  const Matrix omega = symplectic_form(modes_.size());
  return SymplecticOp(modes_, -omega * matrix_.transpose() * omega);
}

Matrix SymplecticOp::embedded(std::span<const ModeLabel> order) const {
  const std::vector<ModeLabel> all(order.begin(), order.end());
  const auto d = static_cast<Eigen::Index>(2 * all.size());
  Matrix full = Matrix::Identity(d, d);
  std::vector<Eigen::Index> pos;
  for (const auto& m : modes_) pos.push_back(static_cast<Eigen::Index>(find_mode(all, m)));
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < pos.size(); ++j) {
      full.block(2 * pos[i], 2 * pos[j], 2, 2) =
          matrix_.block(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(j), 2, 2);
    }
  }
  return full;
}

Matrix SymplecticOp::embedded_noise(std::span<const ModeLabel> order) const {
  const std::vector<ModeLabel> all(order.begin(), order.end());
  const auto d = static_cast<Eigen::Index>(2 * all.size());
  Matrix full = Matrix::Zero(d, d);
  if (!noise_) return full;
  std::vector<Eigen::Index> pos;
  for (const auto& m : modes_) pos.push_back(static_cast<Eigen::Index>(find_mode(all, m)));
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = 0; j < pos.size(); ++j)
      full.block(2 * pos[i], 2 * pos[j], 2, 2) =
          noise_->block(2 * static_cast<Eigen::Index>(i), 2 * static_cast<Eigen::Index>(j), 2, 2);
  return full;
}

SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first) {
  std::vector<ModeLabel> all = first.modes();
  for (const auto& m : second.modes())
    if (std::find(all.begin(), all.end(), m) == all.end()) all.push_back(m);
  const Matrix s1 = first.embedded(all);
  const Matrix s2 = second.embedded(all);
  std::optional<Matrix> noise;
  if (first.noise() || second.noise())
    noise = s2 * first.embedded_noise(all) * s2.transpose() + second.embedded_noise(all);
  return SymplecticOp(all, s2 * s1, std::move(noise));
}

SymplecticOp beamsplitter(double transmissivity, const ModeLabel& a, const ModeLabel& b) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw std::domain_error("beamsplitter transmissivity must lie in [0, 1]");
  if (a == b) throw std::invalid_argument("beamsplitter needs two distinct modes");
  const double ct = std::sqrt(transmissivity);
  const double st = std::sqrt(1.0 - transmissivity);
  Matrix m = Matrix::Zero(4, 4);
  for (Eigen::Index q = 0; q < 2; ++q) {
    m(q, q) = ct;
    m(q, 2 + q) = st;
    m(2 + q, q) = -st;
    m(2 + q, 2 + q) = ct;
  }
  return SymplecticOp({a, b}, std::move(m));
}

SymplecticOp single_mode_squeezer(double r, SqueezeAxis axis, const ModeLabel& mode) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw std::domain_error("squeezing parameter must be finite and >= 0");
  const double up = std::exp(r), down = std::exp(-r);
  Matrix m = Matrix::Zero(2, 2);
  if (axis == SqueezeAxis::Momentum) {
    m(0, 0) = up;
    m(1, 1) = down;
  } else {
    m(0, 0) = down;
    m(1, 1) = up;
  }
  return SymplecticOp({mode}, std::move(m));
}

SymplecticOp cv_cnot(double gain, const ModeLabel& control, const ModeLabel& target) {
  if (!(gain >= 0.0) || !std::isfinite(gain))
    throw std::domain_error("CNOT gain must be finite and >= 0");
  if (control == target) throw std::invalid_argument("CNOT needs two distinct modes");
  Matrix m = Matrix::Identity(4, 4);
  m(1, 3) = -gain;  // Y_R' = Y_R - G Y_M
  m(2, 0) = gain;   // X_M' = X_M + G X_R
  return SymplecticOp({control, target}, std::move(m));
}

SymplecticOp thermal_loss(double transmissivity, double env_photons, const ModeLabel& mode) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw std::domain_error("loss transmissivity must lie in [0, 1]");
  if (!(env_photons >= 0.0)) throw std::domain_error("environment photons must be >= 0");
  Matrix s = std::sqrt(transmissivity) * Matrix::Identity(2, 2);
  Matrix n = (1.0 - transmissivity) * (env_photons + 0.5) * Matrix::Identity(2, 2);
  return SymplecticOp({mode}, std::move(s), std::move(n));
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
  for (const auto& m : op.modes())
    if (!state.has_mode(m))
      throw std::invalid_argument("op acts on mode '" + m.name + "' which the state lacks");
  const Matrix s = op.embedded(state.modes());
  Matrix cov = s * state.cov() * s.transpose() + op.embedded_noise(state.modes());
  Vector mean = s * state.mean();
  return GaussianState(state.modes(), symmetrized(cov), std::move(mean));
}

std::span<const double> SampleBatch::column(const ModeLabel& m, Quadrature q) const {
  return column(2 * find_mode(modes, m) + (q == Quadrature::Y ? 1 : 0));
}

SampleBatch sample(const GaussianState& state, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const Matrix factor = symmetric_sqrt(state.cov());
  const std::size_t dims = state.dim();
  std::vector<double> m(dims * dims);
  for (std::size_t r = 0; r < dims; ++r)
    for (std::size_t c = 0; c < dims; ++c)
      m[r * dims + c] = factor(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));

  SampleBatch batch{state.modes(), n_samples, seed, std::vector<double>(dims * n_samples)};
  const std::size_t chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  const auto& k = kernels::active();
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk;
    const std::size_t len = std::min(kSampleChunk, n_samples - begin);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(dims * len), x(dims * len);
    for (auto& v : z) v = normal(rng);
    k.linear_map(m.data(), dims, dims, z.data(), x.data(), len);
    for (std::size_t j = 0; j < dims; ++j) {
      const double mu = state.mean()(static_cast<Eigen::Index>(j));
      double* dst = batch.data.data() + j * n_samples + begin;
      const double* src = x.data() + j * len;
      for (std::size_t i = 0; i < len; ++i) dst[i] = src[i] + mu;
    }
  });
  return batch;
}

SampleBatch transform(const SymplecticOp& op, const SampleBatch& batch) {
  if (op.noise()) throw std::invalid_argument("transform requires a noise-free op");
  const Matrix s = op.embedded(batch.modes);
  const std::size_t dims = batch.dims();
  std::vector<double> m(dims * dims);
  for (std::size_t r = 0; r < dims; ++r)
    for (std::size_t c = 0; c < dims; ++c)
      m[r * dims + c] = s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  SampleBatch out{batch.modes, batch.n_samples, batch.seed, std::vector<double>(batch.data.size())};
  kernels::active().linear_map(m.data(), dims, dims, batch.data.data(), out.data.data(),
                               batch.n_samples);
  return out;
}

EmpiricalMoments empirical_moments(const SampleBatch& batch) {
  const std::size_t dims = batch.dims();
  std::vector<double> gram(dims * dims, 0.0);
  kernels::active().accumulate_gram(batch.data.data(), dims, batch.n_samples, gram.data());
  const auto d = static_cast<Eigen::Index>(dims);
  const double n = static_cast<double>(batch.n_samples);
  EmpiricalMoments out{Matrix(d, d), Matrix(d, d)};
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k)
      out.second_moments(j, k) = gram[static_cast<std::size_t>(j * d + k)] / n;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) {
      const double sjk = out.second_moments(j, k);
      out.standard_errors(j, k) =
          std::sqrt((out.second_moments(j, j) * out.second_moments(k, k) + sjk * sjk) / n);
    }
  return out;
}

}  // namespace qisim
