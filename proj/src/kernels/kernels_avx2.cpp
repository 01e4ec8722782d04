// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after a CPUID check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qisim::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void linear_map_avx2(const double* m, std::size_t rows, std::size_t cols,
                     const double* in, double* out, std::size_t n) {
  const std::size_t nv = n & ~std::size_t{3};
  for (std::size_t r = 0; r < rows; ++r) {
    const double* w = m + r * cols;
    double* dst = out + r * n;
    std::size_t i = 0;
    for (; i < nv; i += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t c = 0; c < cols; ++c) {
        if (w[c] == 0.0) continue;
        acc = _mm256_fmadd_pd(_mm256_set1_pd(w[c]),
                              _mm256_loadu_pd(in + c * n + i), acc);
      }
      _mm256_storeu_pd(dst + i, acc);
    }
    for (; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < cols; ++c) acc += w[c] * in[c * n + i];
      dst[i] = acc;
    }
  }
}

void accumulate_gram_avx2(const double* x, std::size_t dims, std::size_t n,
                          double* gram) {
  const std::size_t nv = n & ~std::size_t{7};
  for (std::size_t j = 0; j < dims; ++j) {
    const double* a = x + j * n;
    for (std::size_t k = j; k < dims; ++k) {
      const double* b = x + k * n;
      __m256d acc0 = _mm256_setzero_pd();
      __m256d acc1 = _mm256_setzero_pd();
      std::size_t i = 0;
      for (; i < nv; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                               _mm256_loadu_pd(b + i + 4), acc1);
      }
      double s = hsum(_mm256_add_pd(acc0, acc1));
      for (; i < n; ++i) s += a[i] * b[i];
      gram[j * dims + k] += s;
      if (k != j) gram[k * dims + j] += s;
    }
  }
}

void photocurrent_avx2(const double* x, const double* y, std::size_t n,
                       double lo_re, double lo_im, double* current) {
  const __m256d scale = _mm256_set1_pd(0.70710678118654752440);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d dr = _mm256_set1_pd(lo_re);
  const __m256d di = _mm256_set1_pd(lo_im);
  const std::size_t nv = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    const __m256d ar = _mm256_mul_pd(_mm256_loadu_pd(x + i), scale);
    const __m256d ai = _mm256_mul_pd(_mm256_loadu_pd(y + i), scale);
    const __m256d p_re = _mm256_add_pd(ar, di);
    const __m256d p_im = _mm256_sub_pd(ai, dr);
    const __m256d q_re = _mm256_add_pd(dr, ai);
    const __m256d q_im = _mm256_sub_pd(di, ar);
    const __m256d n1 = _mm256_mul_pd(
        half, _mm256_fmadd_pd(p_re, p_re, _mm256_mul_pd(p_im, p_im)));
    const __m256d n2 = _mm256_mul_pd(
        half, _mm256_fmadd_pd(q_re, q_re, _mm256_mul_pd(q_im, q_im)));
    _mm256_storeu_pd(current + i, _mm256_sub_pd(n1, n2));
  }
  if (i < n) photocurrent_scalar(x + i, y + i, n - i, lo_re, lo_im, current + i);
}

void accumulate_squares_avx2(const double* v, std::size_t n, double* acc) {
  const std::size_t nv = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    const __m256d a = _mm256_loadu_pd(v + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(a, a, _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] += v[i] * v[i];
}

void accumulate_moments_avx2(const double* v, std::size_t n, double* sum,
                             double* sum_sq) {
  const std::size_t nv = n & ~std::size_t{3};
  __m256d s = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    const __m256d a = _mm256_loadu_pd(v + i);
    s = _mm256_add_pd(s, a);
    s2 = _mm256_fmadd_pd(a, a, s2);
  }
  double total = hsum(s), total_sq = hsum(s2);
  for (; i < n; ++i) {
    total += v[i];
    total_sq += v[i] * v[i];
  }
  *sum += total;
  *sum_sq += total_sq;
}

}  // namespace qisim::kernels::detail
