#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Scalar reference kernels and AVX2 variants for the two data-parallel
// inner loops of the toolkit: Levenshtein DP over code points (dialect
// matching) and dense float vector products (embedding similarity).
// The active variant is chosen once at startup from CPU features and can
// be pinned with the PAREMIA_KERNEL environment variable ("scalar" or
// "avx2") for equivalence testing.

namespace paremia::kernels {

struct Kernels {
  // Exact unit-cost edit distance over 32-bit code points.
  uint32_t (*levenshtein_u32)(std::span<const uint32_t> a, std::span<const uint32_t> b);
  // Dot product and squared L2 norm over embedding vectors.
  double (*dot_f64)(std::span<const double> a, std::span<const double> b);
  double (*norm_sq_f64)(std::span<const double> a);
  const char* name;
};

// Active kernel set (cpuid + PAREMIA_KERNEL override, resolved once).
const Kernels& active();

// Named kernel sets, for equivalence tests. avx2() returns nullptr when the
// binary was built without AVX2 support or the CPU lacks it.
const Kernels& scalar();
const Kernels* avx2();

inline uint32_t levenshtein_u32(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  return active().levenshtein_u32(a, b);
}
inline double dot_f64(std::span<const double> a, std::span<const double> b) {
  return active().dot_f64(a, b);
}
inline double norm_sq_f64(std::span<const double> a) {
  return active().norm_sq_f64(a);
}

// cosine(a, b); returns false when either norm is zero (cosine undefined).
bool cosine_f64(std::span<const double> a, std::span<const double> b, double& out);

}  // namespace paremia::kernels
