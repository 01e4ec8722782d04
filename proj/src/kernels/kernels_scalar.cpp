#include "kernels_impl.hpp"

namespace qisim::kernels::detail {

void linear_map_scalar(const double* m, std::size_t rows, std::size_t cols,
                       const double* in, double* out, std::size_t n) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out + r * n;
    for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double w = m[r * cols + c];
      if (w == 0.0) continue;
      const double* src = in + c * n;
      for (std::size_t i = 0; i < n; ++i) dst[i] += w * src[i];
    }
  }
}

void accumulate_gram_scalar(const double* x, std::size_t dims, std::size_t n,
                            double* gram) {
  for (std::size_t j = 0; j < dims; ++j) {
    const double* a = x + j * n;
    for (std::size_t k = j; k < dims; ++k) {
      const double* b = x + k * n;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
      gram[j * dims + k] += s;
      if (k != j) gram[k * dims + j] += s;
    }
  }
}

void photocurrent_scalar(const double* x, const double* y, std::size_t n,
                         double lo_re, double lo_im, double* current) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = x[i] * kInvSqrt2;
    const double ai = y[i] * kInvSqrt2;
    // detector fields (a - i d) and (d - i a), each scaled by 1/sqrt(2)
    const double p_re = ar + lo_im, p_im = ai - lo_re;
    const double q_re = lo_re + ai, q_im = lo_im - ar;
    const double n1 = 0.5 * (p_re * p_re + p_im * p_im);
    const double n2 = 0.5 * (q_re * q_re + q_im * q_im);
    current[i] = n1 - n2;
  }
}

void accumulate_squares_scalar(const double* v, std::size_t n, double* acc) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += v[i] * v[i];
}

void accumulate_moments_scalar(const double* v, std::size_t n, double* sum,
                               double* sum_sq) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += v[i];
    s2 += v[i] * v[i];
  }
  *sum += s;
  *sum_sq += s2;
}

}  // namespace qisim::kernels::detail
