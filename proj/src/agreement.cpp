#include "paremia/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "paremia/errors.hpp"

namespace paremia {

namespace {

// Pairwise-deleted numeric views of two annotator columns.
void overlapping(std::span<const std::optional<int>> a, std::span<const std::optional<int>> b,
                 std::vector<double>& xs, std::vector<double>& ys) {
  xs.clear();
  ys.clear();
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] && b[i]) {
      xs.push_back(*a[i]);
      ys.push_back(*b[i]);
    }
  }
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n < 3) return std::nullopt;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;  // zero variance: undefined
  return sxy / std::sqrt(sxx * syy);
}

// Average mid-ranks (ties share the mean of their rank positions).
std::vector<double> midranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::optional<int>> column(const AnnotationMatrix& m, size_t a) {
  std::vector<std::optional<int>> col(m.items.size());
  for (size_t i = 0; i < m.items.size(); ++i) col[i] = m.at(i, a);
  return col;
}

double mean_of_defined(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

double mean_upper_offdiagonal(std::span<const std::optional<double>> matrix, size_t n) {
  std::vector<std::optional<double>> cells;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) cells.push_back(matrix[i * n + j]);
  return mean_of_defined(cells);
}

}  // namespace

std::optional<size_t> AnnotationMatrix::annotator_index(std::string_view id) const {
  for (size_t i = 0; i < annotators.size(); ++i)
    if (annotators[i] == id) return i;
  return std::nullopt;
}

AnnotationMatrix AnnotationMatrix::sentiment(const Corpus& corpus) {
  AnnotationMatrix m;
  m.annotators = corpus.annotator_ids;
  std::map<std::string_view, size_t> item_index;
  for (const auto& p : corpus.proverbs) {
    item_index.emplace(p.id, m.items.size());
    m.items.push_back(p.id);
  }
  m.cells.assign(m.items.size() * m.annotators.size(), std::nullopt);
  for (const auto& r : corpus.annotations) {
    if (!r.sentiment) continue;
    const auto item = item_index.find(r.proverb_id);
    const auto ann = m.annotator_index(r.annotator_id);
    if (item == item_index.end() || !ann) continue;
    m.at(item->second, *ann) = sentiment_rating(*r.sentiment);
  }
  return m;
}

AnnotationMatrix AnnotationMatrix::emosent(const Corpus& corpus) {
  AnnotationMatrix m;
  m.annotators = corpus.annotator_ids;
  std::map<std::string_view, size_t> item_index;
  for (const auto& p : corpus.proverbs) {
    item_index.emplace(p.id, m.items.size());
    m.items.push_back(p.id);
  }
  m.cells.assign(m.items.size() * m.annotators.size(), std::nullopt);
  for (const auto& r : corpus.annotations) {
    if (r.emotions.empty()) continue;
    const auto item = item_index.find(r.proverb_id);
    const auto ann = m.annotator_index(r.annotator_id);
    if (item == item_index.end() || !ann) continue;
    m.at(item->second, *ann) = sentiment_rating(map_emotions_to_sentiment(r.emotions));
  }
  return m;
}

AnnotationMatrix AnnotationMatrix::without_annotators(std::span<const std::string> ids) const {
  const std::set<std::string_view> drop(ids.begin(), ids.end());
  AnnotationMatrix out;
  out.items = items;
  std::vector<size_t> keep;
  for (size_t a = 0; a < annotators.size(); ++a) {
    if (!drop.contains(annotators[a])) {
      keep.push_back(a);
      out.annotators.push_back(annotators[a]);
    }
  }
  out.cells.reserve(items.size() * keep.size());
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t a : keep) out.cells.push_back(at(i, a));
  return out;
}

double cohen_kappa(std::span<const std::optional<int>> a, std::span<const std::optional<int>> b) {
  std::vector<int> xs, ys;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] && b[i]) {
      xs.push_back(*a[i]);
      ys.push_back(*b[i]);
    }
  }
  if (xs.size() < 2) throw DataError("cohen_kappa: fewer than 2 overlapping items");

  const double total = static_cast<double>(xs.size());
  std::map<int, double> marg_a, marg_b;
  double observed = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    marg_a[xs[i]] += 1.0;
    marg_b[ys[i]] += 1.0;
    if (xs[i] == ys[i]) observed += 1.0;
  }
  const double p_o = observed / total;
  double p_e = 0.0;
  for (const auto& [label, count_a] : marg_a) {
    const auto it = marg_b.find(label);
    if (it != marg_b.end()) p_e += (count_a / total) * (it->second / total);
  }
  if (p_e >= 1.0) return p_o >= 1.0 ? 1.0 : 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

std::vector<std::optional<double>> kappa_matrix(const AnnotationMatrix& m) {
  const size_t n = m.annotators.size();
  std::vector<std::optional<double>> out(n * n);
  std::vector<std::vector<std::optional<int>>> cols;
  for (size_t a = 0; a < n; ++a) cols.push_back(column(m, a));
  for (size_t i = 0; i < n; ++i) {
    out[i * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      std::optional<double> k;
      try {
        k = cohen_kappa(cols[i], cols[j]);
      } catch (const DataError&) {
        k = std::nullopt;
      }
      out[i * n + j] = k;
      out[j * n + i] = k;
    }
  }
  return out;
}

double krippendorff_alpha(const AnnotationMatrix& m) {
  if (m.annotators.size() < 2) throw DataError("krippendorff_alpha: need >= 2 annotators");

  // Coincidence matrix over the observed value domain: each pairable unit
  // contributes every ordered pair of its values, weighted by 1/(m_u - 1).
  std::map<int, size_t> code_index;
  for (const auto& c : m.cells)
    if (c) code_index.emplace(*c, 0);
  size_t next = 0;
  for (auto& [code, idx] : code_index) idx = next++;
  const size_t v = code_index.size();
  if (v == 0) throw DataError("krippendorff_alpha: matrix has no labels");

  std::vector<double> coincidence(v * v, 0.0);
  bool any_pairable = false;
  for (size_t item = 0; item < m.items.size(); ++item) {
    std::vector<size_t> values;
    for (size_t a = 0; a < m.annotators.size(); ++a)
      if (m.at(item, a)) values.push_back(code_index.at(*m.at(item, a)));
    if (values.size() < 2) continue;
    any_pairable = true;
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (size_t x = 0; x < values.size(); ++x)
      for (size_t y = 0; y < values.size(); ++y)
        if (x != y) coincidence[values[x] * v + values[y]] += w;
  }
  if (!any_pairable) throw DataError("krippendorff_alpha: no item has two or more labels");

  std::vector<double> totals(v, 0.0);
  double n = 0.0;
  for (size_t c = 0; c < v; ++c) {
    for (size_t k = 0; k < v; ++k) totals[c] += coincidence[c * v + k];
    n += totals[c];
  }
  double d_observed = 0.0;
  for (size_t c = 0; c < v; ++c)
    for (size_t k = 0; k < v; ++k)
      if (c != k) d_observed += coincidence[c * v + k];
  double d_expected = 0.0;
  for (size_t c = 0; c < v; ++c)
    for (size_t k = 0; k < v; ++k)
      if (c != k) d_expected += totals[c] * totals[k];
  d_expected /= (n - 1.0);
  if (d_expected == 0.0) return 1.0;  // one value observed everywhere
  return 1.0 - d_observed / d_expected;
}

std::vector<std::optional<double>> correlation_matrix(const AnnotationMatrix& m,
                                                      CorrelationMethod method) {
  const size_t n = m.annotators.size();
  std::vector<std::optional<double>> out(n * n);
  std::vector<std::vector<std::optional<int>>> cols;
  for (size_t a = 0; a < n; ++a) cols.push_back(column(m, a));
  std::vector<double> xs, ys;
  for (size_t i = 0; i < n; ++i) {
    out[i * n + i] = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      overlapping(cols[i], cols[j], xs, ys);
      std::optional<double> r;
      if (method == CorrelationMethod::Pearson) {
        r = pearson(xs, ys);
      } else if (xs.size() >= 3) {
        const auto rx = midranks(xs);
        const auto ry = midranks(ys);
        r = pearson(rx, ry);
      }
      out[i * n + j] = r;
      out[j * n + i] = r;
    }
  }
  return out;
}

std::vector<std::optional<double>> mean_offdiagonal(std::span<const std::optional<double>> matrix,
                                                    size_t n) {
  std::vector<std::optional<double>> means(n);
  for (size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    size_t count = 0;
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (matrix[i * n + j]) {
        sum += *matrix[i * n + j];
        ++count;
      }
    }
    if (count > 0) means[i] = sum / static_cast<double>(count);
  }
  return means;
}

std::vector<std::string> flag_outlier_annotators(const AnnotationMatrix& m,
                                                 std::span<const std::optional<double>> corr,
                                                 double min_mean_corr) {
  const size_t n = m.annotators.size();
  const auto means = mean_offdiagonal(corr, n);
  std::vector<std::pair<double, std::string>> flagged;
  for (size_t i = 0; i < n; ++i) {
    if (means[i] && *means[i] < min_mean_corr) flagged.emplace_back(*means[i], m.annotators[i]);
  }
  std::sort(flagged.begin(), flagged.end());
  std::vector<std::string> out;
  for (auto& [mean, id] : flagged) out.push_back(std::move(id));
  return out;
}

AgreementReport agreement_report(const AnnotationMatrix& m, double min_mean_corr) {
  AgreementReport rep;
  rep.annotators = m.annotators;
  rep.kappa_pairwise = kappa_matrix(m);
  rep.pearson_pairwise = correlation_matrix(m, CorrelationMethod::Pearson);
  rep.spearman_pairwise = correlation_matrix(m, CorrelationMethod::Spearman);
  const size_t n = m.annotators.size();
  rep.kappa_mean = mean_upper_offdiagonal(rep.kappa_pairwise, n);
  rep.pearson_mean = mean_upper_offdiagonal(rep.pearson_pairwise, n);
  rep.spearman_mean = mean_upper_offdiagonal(rep.spearman_pairwise, n);
  rep.alpha = krippendorff_alpha(m);
  rep.flagged_annotators = flag_outlier_annotators(m, rep.pearson_pairwise, min_mean_corr);
  return rep;
}

std::string agreement_report_to_json(const AgreementReport& report) {
  using nlohmann::ordered_json;
  const auto matrix_to_json = [&](std::span<const std::optional<double>> mat) {
    const size_t n = report.annotators.size();
    ordered_json rows = ordered_json::array();
    for (size_t i = 0; i < n; ++i) {
      ordered_json row = ordered_json::array();
      for (size_t j = 0; j < n; ++j) {
        if (mat[i * n + j]) row.push_back(*mat[i * n + j]);
        else row.push_back(nullptr);
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  ordered_json o;
  o["annotators"] = report.annotators;
  o["kappa_mean"] = report.kappa_mean;
  o["alpha"] = report.alpha;
  o["spearman_mean"] = report.spearman_mean;
  o["pearson_mean"] = report.pearson_mean;
  o["kappa_pairwise"] = matrix_to_json(report.kappa_pairwise);
  o["pearson_pairwise"] = matrix_to_json(report.pearson_pairwise);
  o["spearman_pairwise"] = matrix_to_json(report.spearman_pairwise);
  o["flagged_annotators"] = report.flagged_annotators;
  if (report.self_agreement) {
    ordered_json sa;
    for (const auto& [annotator, pct] : report.self_agreement->per_annotator)
      sa[annotator] = pct;
    o["self_agreement_percent"] = sa;
    o["self_agreement_mean_percent"] = report.self_agreement->mean_percent;
  }
  return o.dump(2) + "\n";
}

}  // namespace paremia
