#pragma once

#include <cstddef>

namespace qisim::kernels::detail {

void linear_map_scalar(const double* m, std::size_t rows, std::size_t cols,
                       const double* in, double* out, std::size_t n);
void accumulate_gram_scalar(const double* x, std::size_t dims, std::size_t n,
                            double* gram);
void photocurrent_scalar(const double* x, const double* y, std::size_t n,
                         double lo_re, double lo_im, double* current);
void accumulate_squares_scalar(const double* v, std::size_t n, double* acc);
void accumulate_moments_scalar(const double* v, std::size_t n, double* sum,
                               double* sum_sq);

#if defined(QISIM_HAVE_AVX2)
void linear_map_avx2(const double* m, std::size_t rows, std::size_t cols,
                     const double* in, double* out, std::size_t n);
void accumulate_gram_avx2(const double* x, std::size_t dims, std::size_t n,
                          double* gram);
void photocurrent_avx2(const double* x, const double* y, std::size_t n,
                       double lo_re, double lo_im, double* current);
void accumulate_squares_avx2(const double* v, std::size_t n, double* acc);
void accumulate_moments_avx2(const double* v, std::size_t n, double* sum,
                             double* sum_sq);
#endif

}  // namespace qisim::kernels::detail
