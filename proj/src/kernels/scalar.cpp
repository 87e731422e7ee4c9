#include "paremia/kernels/kernels.hpp"

#include <algorithm>
#include <vector>

namespace paremia::kernels {

namespace {

uint32_t lev_scalar(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  const size_t m = a.size();
  const size_t n = b.size();
  if (m == 0) return static_cast<uint32_t>(n);
  if (n == 0) return static_cast<uint32_t>(m);

  // Two-row DP, rows along b.
  std::vector<uint32_t> prev(n + 1), cur(n + 1);
  for (size_t j = 0; j <= n; ++j) prev[j] = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<uint32_t>(i);
    const uint32_t ai = a[i - 1];
    for (size_t j = 1; j <= n; ++j) {
      const uint32_t sub = prev[j - 1] + (ai == b[j - 1] ? 0u : 1u);
      const uint32_t del = prev[j] + 1u;
      const uint32_t ins = cur[j - 1] + 1u;
      cur[j] = std::min(sub, std::min(del, ins));
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq_scalar(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

}  // namespace

const Kernels& scalar() {
  static const Kernels k{lev_scalar, dot_scalar, norm_sq_scalar, "scalar"};
  return k;
}

}  // namespace paremia::kernels
