#pragma once

// Independent reference implementations used only by tests. These stay on
// naive, enumerate-everything code paths so they cannot share a bug with
// the library implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace oracles {

// Full-table edit distance, no rolling rows, no SIMD.
inline uint32_t levenshtein_full_table(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  const size_t m = a.size(), n = b.size();
  std::vector<std::vector<uint32_t>> d(m + 1, std::vector<uint32_t>(n + 1, 0));
  for (size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (size_t i = 1; i <= m; ++i)
    for (size_t j = 1; j <= n; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return d[m][n];
}

// Cohen's kappa by direct pairwise-agreement enumeration.
inline double kappa_enumeration(std::span<const int> a, std::span<const int> b) {
  const double n = static_cast<double>(a.size());
  double agree = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) agree += 1;
  const double p_o = agree / n;
  // expected agreement: for every label, the product of both raters'
  // relative frequencies, enumerated pair by pair
  double p_e = 0;
  std::map<int, double> fa, fb;
  for (size_t i = 0; i < a.size(); ++i) {
    fa[a[i]] += 1.0 / n;
    fb[b[i]] += 1.0 / n;
  }
  for (const auto& [label, freq] : fa) {
    const auto it = fb.find(label);
    if (it != fb.end()) p_e += freq * it->second;
  }
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

// Krippendorff's alpha by brute force: observed disagreement enumerates all
// ordered within-unit pairs (weight 1/(m_u-1)); expected disagreement
// enumerates every ordered pair of pooled values, O(n^2).
inline std::optional<double> alpha_bruteforce(
    const std::vector<std::vector<std::optional<int>>>& units) {
  double n_pairable = 0;
  double d_obs_num = 0;
  std::vector<int> pooled;
  for (const auto& unit : units) {
    std::vector<int> vals;
    for (const auto& cell : unit)
      if (cell) vals.push_back(*cell);
    if (vals.size() < 2) continue;
    n_pairable += static_cast<double>(vals.size());
    for (int v : vals) pooled.push_back(v);
    const double w = 1.0 / static_cast<double>(vals.size() - 1);
    for (size_t x = 0; x < vals.size(); ++x)
      for (size_t y = 0; y < vals.size(); ++y)
        if (x != y && vals[x] != vals[y]) d_obs_num += w;
  }
  if (pooled.empty()) return std::nullopt;
  const double d_o = d_obs_num / n_pairable;
  double d_exp_num = 0;
  for (size_t x = 0; x < pooled.size(); ++x)
    for (size_t y = 0; y < pooled.size(); ++y)
      if (x != y && pooled[x] != pooled[y]) d_exp_num += 1.0;
  const double d_e = d_exp_num / (n_pairable * (n_pairable - 1.0));
  if (d_e == 0.0) return 1.0;
  return 1.0 - d_o / d_e;
}

// Pearson via the computational formula (different algebra from the
// centered-sums implementation).
inline std::optional<double> pearson_direct(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
  }
  const double den_sq = (n * sxx - sx * sx) * (n * syy - sy * sy);
  if (den_sq <= 0) return std::nullopt;
  return (n * sxy - sx * sy) / std::sqrt(den_sq);
}

inline std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  for (size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i;
    while (j + 1 < v.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = (i + j) / 2.0 + 1.0;
    i = j + 1;
  }
  return ranks;
}

inline double population_variance(std::span<const int> ratings) {
  double mean = 0;
  for (int r : ratings) mean += r;
  mean /= static_cast<double>(ratings.size());
  double acc = 0;
  for (int r : ratings) acc += (r - mean) * (r - mean);
  return acc / static_cast<double>(ratings.size());
}

// Minimum subset objective by exhaustive enumeration of all (n choose k)
// index subsets.
inline double min_subset_variance_sum(std::span<const double> variances, int k) {
  const size_t n = variances.size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> idx(k);
  // iterative combination enumeration
  for (size_t i = 0; i < static_cast<size_t>(k); ++i) idx[i] = i;
  while (true) {
    double sum = 0;
    for (size_t i : idx) sum += variances[i];
    best = std::min(best, sum);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - static_cast<size_t>(k - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (size_t i = pos + 1; i < static_cast<size_t>(k); ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

// Per-class precision/recall/F1 computed from scratch (no confusion matrix).
inline double weighted_f1_direct(std::span<const int> gold, std::span<const int> pred) {
  double out = 0;
  const double n = static_cast<double>(gold.size());
  for (int c : {0, 1, 2}) {
    double tp = 0, fp = 0, fn = 0, support = 0;
    for (size_t i = 0; i < gold.size(); ++i) {
      if (gold[i] == c) support += 1;
      if (gold[i] == c && pred[i] == c) tp += 1;
      if (gold[i] != c && pred[i] == c) fp += 1;
      if (gold[i] == c && pred[i] != c) fn += 1;
    }
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    out += (support / n) * f1;
  }
  return out;
}

}  // namespace oracles
