#pragma once

// Data-parallel inner loops of the Monte-Carlo paths.
//
// Sample blocks are column-major: quadrature column j of an n-sample block
// occupies [j*n, (j+1)*n). Every kernel has a scalar reference implementation
// and, on x86-64, an AVX2/FMA variant. The active table is chosen once at
// startup from CPUID and may be forced with QISIM_SIMD=scalar|avx2.

#include <cstddef>
#include <string_view>

namespace qisim::kernels {

struct KernelTable {
  std::string_view name;

  // out(r, :) = sum_c m[r*cols + c] * in(c, :)
  void (*linear_map)(const double* m, std::size_t rows, std::size_t cols,
                     const double* in, double* out, std::size_t n);

  // gram[j*dims + k] += sum_i x(j, i) * x(k, i); full symmetric result.
  void (*accumulate_gram)(const double* x, std::size_t dims, std::size_t n,
                          double* gram);

  // Balanced double-port homodyne with a classical LO amplitude (lo_re, lo_im).
  // The input field sample is a = (x + i y)/sqrt(2). The mixer sends
  // a -> (a - i d)/sqrt(2), d -> (d - i a)/sqrt(2); current is the difference
  // of the two square-law detector intensities.
  void (*photocurrent)(const double* x, const double* y, std::size_t n,
                       double lo_re, double lo_im, double* current);

  // acc[i] += v[i]^2
  void (*accumulate_squares)(const double* v, std::size_t n, double* acc);

  // *sum += sum_i v[i]; *sum_sq += sum_i v[i]^2
  void (*accumulate_moments)(const double* v, std::size_t n, double* sum,
                             double* sum_sq);
};

const KernelTable& scalar();

// nullptr when the variant is not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2();

const KernelTable& active();

}  // namespace qisim::kernels
