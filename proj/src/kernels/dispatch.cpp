#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"
#include "qisim/kernels.hpp"

namespace qisim::kernels {

namespace {

constexpr KernelTable kScalar{
    "scalar",
    &detail::linear_map_scalar,
    &detail::accumulate_gram_scalar,
    &detail::photocurrent_scalar,
    &detail::accumulate_squares_scalar,
    &detail::accumulate_moments_scalar,
};

#if defined(QISIM_HAVE_AVX2)
constexpr KernelTable kAvx2{
    "avx2",
    &detail::linear_map_avx2,
    &detail::accumulate_gram_avx2,
    &detail::photocurrent_avx2,
    &detail::accumulate_squares_avx2,
    &detail::accumulate_moments_avx2,
};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() {
  const char* forced = std::getenv("QISIM_SIMD");
  const std::string choice = forced ? forced : "";
  if (choice == "scalar") return kScalar;
  const KernelTable* vec = avx2();
  if (choice == "avx2") {
    if (!vec) throw std::runtime_error("QISIM_SIMD=avx2 requested but AVX2 kernels are unavailable");
    return *vec;
  }
  if (!choice.empty())
    throw std::runtime_error("QISIM_SIMD must be 'scalar' or 'avx2', got '" + choice + "'");
  return vec ? *vec : kScalar;
}

}  // namespace

const KernelTable& scalar() { return kScalar; }

const KernelTable* avx2() {
#if defined(QISIM_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace qisim::kernels
