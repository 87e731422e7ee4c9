#include "paremia/kernels/kernels.hpp"

#if defined(PAREMIA_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <vector>

namespace paremia::kernels {

namespace {

// Anti-diagonal wavefront DP. Cells on diagonal d = i + j depend only on
// diagonals d-1 and d-2, so a diagonal is computed 8 lanes at a time.
// Comparing a[i-1] with b[j-1] along a diagonal walks a forward and b
// backward; with b reversed both sides become contiguous loads.
uint32_t lev_avx2(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  if (a.size() > b.size()) std::swap(a, b);
  const size_t m = a.size();
  const size_t n = b.size();
  if (m == 0) return static_cast<uint32_t>(n);

  thread_local std::vector<uint32_t> buf0, buf1, buf2, brev;
  buf0.assign(m + 1, 0);
  buf1.assign(m + 1, 0);
  buf2.assign(m + 1, 0);
  brev.assign(n, 0);
  for (size_t x = 0; x < n; ++x) brev[x] = b[n - 1 - x];

  uint32_t* diag0 = buf0.data();  // d - 2
  uint32_t* diag1 = buf1.data();  // d - 1
  uint32_t* diag2 = buf2.data();  // d

  diag0[0] = 0;        // D[0][0]
  diag1[0] = 1;        // D[0][1]
  if (m >= 1) diag1[1] = 1;  // D[1][0]

  const __m256i one = _mm256_set1_epi32(1);

  for (size_t d = 2; d <= m + n; ++d) {
    const size_t ilo = d > n ? d - n : 1;
    const size_t ihi = std::min(d - 1, m);
    if (d <= n) diag2[0] = static_cast<uint32_t>(d);
    if (d <= m) diag2[d] = static_cast<uint32_t>(d);

    size_t i = ilo;
    // brev index for lane 0: n - d + i (see derivation above).
    for (; i + 8 <= ihi + 1; i += 8) {
      const __m256i up = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(diag1 + i - 1));
      const __m256i left = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(diag1 + i));
      const __m256i diag = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(diag0 + i - 1));
      const __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i - 1));
      const __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(brev.data() + (n - d + i)));
      // equal lanes give mask 0xFFFFFFFF == -1, so 1 + mask is the sub cost.
      const __m256i cost = _mm256_add_epi32(one, _mm256_cmpeq_epi32(av, bv));
      const __m256i step = _mm256_add_epi32(_mm256_min_epu32(up, left), one);
      const __m256i sub = _mm256_add_epi32(diag, cost);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(diag2 + i), _mm256_min_epu32(step, sub));
    }
    for (; i <= ihi; ++i) {
      const uint32_t cost = a[i - 1] == brev[n - d + i] ? 0u : 1u;
      diag2[i] = std::min(std::min(diag1[i - 1], diag1[i]) + 1u, diag0[i - 1] + cost);
    }

    uint32_t* t = diag0;
    diag0 = diag1;
    diag1 = diag2;
    diag2 = t;
  }
  return diag1[m];
}

double dot_avx2(std::span<const float> a, std::span<const float> b) {
  const size_t n = std::min(a.size(), b.size());
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_loadu_ps(a.data() + i);
    const __m256 vb = _mm256_loadu_ps(b.data() + i);
    acc0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                           _mm256_cvtps_pd(_mm256_castps256_ps128(vb)), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                           _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)), acc1);
  }
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, _mm256_add_pd(acc0, acc1));
  double acc = tmp[0] + tmp[1] + tmp[2] + tmp[3];
  for (; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

double norm_sq_avx2(std::span<const float> a) { return dot_avx2(a, a); }

}  // namespace

const Kernels* avx2() {
  if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma")) return nullptr;
  static const Kernels k{lev_avx2, dot_avx2, norm_sq_avx2, "avx2"};
  return &k;
}

}  // namespace paremia::kernels

#else

namespace paremia::kernels {
const Kernels* avx2() { return nullptr; }
}  // namespace paremia::kernels

#endif
