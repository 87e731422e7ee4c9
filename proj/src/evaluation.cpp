#include "paremia/evaluation.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "paremia/errors.hpp"

namespace paremia {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

std::optional<double> pearson_columns(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n < 2) return std::nullopt;
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
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

long ConfusionMatrix::total() const {
  long n = 0;
  for (const auto& row : counts)
    for (long c : row) n += c;
  return n;
}

long ConfusionMatrix::gold_support(Sentiment s) const {
  long n = 0;
  for (long c : counts[static_cast<size_t>(s)]) n += c;
  return n;
}

ConfusionMatrix confusion_matrix(std::span<const Sentiment> gold, std::span<const Sentiment> pred) {
  if (gold.size() != pred.size())
    throw DataError("confusion_matrix: length mismatch (" + std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  if (gold.empty()) throw DataError("confusion_matrix: empty input");
  ConfusionMatrix m;
  for (size_t i = 0; i < gold.size(); ++i) ++m.at(gold[i], pred[i]);
  return m;
}

EvalReport evaluate_labels(std::span<const Sentiment> gold, std::span<const Sentiment> pred,
                           size_t n_failures) {
  EvalReport report;
  report.confusion = confusion_matrix(gold, pred);
  report.n_items = gold.size();
  report.n_failures = n_failures;

  const double total = static_cast<double>(gold.size());
  double weighted = 0.0;
  for (size_t c = 0; c < 3; ++c) {
    const Sentiment s = kSentimentOrder[c];
    const long tp = report.confusion.at(s, s);
    long pred_count = 0;
    for (Sentiment g : kSentimentOrder) pred_count += report.confusion.at(g, s);
    const long support = report.confusion.gold_support(s);
    ClassMetrics& m = report.per_class[c];
    m.support = support;
    m.precision = ratio(tp, pred_count);
    m.recall = ratio(tp, support);
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    weighted += (static_cast<double>(support) / total) * m.f1;
  }
  report.weighted_f1 = weighted;
  return report;
}

double weighted_f1(std::span<const Sentiment> gold, std::span<const Sentiment> pred) {
  return evaluate_labels(gold, pred).weighted_f1;
}

EvalReport evaluate_outcomes(std::span<const Sentiment> gold,
                             std::span<const std::optional<Sentiment>> pred,
                             std::optional<Sentiment> fallback) {
  if (gold.size() != pred.size())
    throw DataError("evaluate_outcomes: length mismatch");
  std::vector<Sentiment> g, p;
  size_t failures = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (pred[i]) {
      g.push_back(gold[i]);
      p.push_back(*pred[i]);
    } else {
      ++failures;
      if (fallback) {
        g.push_back(gold[i]);
        p.push_back(*fallback);
      }
    }
  }
  if (g.empty()) throw DataError("evaluate_outcomes: no scorable predictions");
  return evaluate_labels(g, p, failures);
}

DistributionEvalReport distribution_errors(std::span<const Distribution> gold,
                                           std::span<const Distribution> pred,
                                           bool rho_against_onehot) {
  if (gold.size() != pred.size()) throw DataError("distribution_errors: length mismatch");
  if (gold.empty()) throw DataError("distribution_errors: empty input");

  DistributionEvalReport report;
  report.n_items = gold.size();
  double abs_sum = 0.0, sq_sum = 0.0;
  std::array<std::vector<double>, 3> gold_cols, pred_cols;
  for (size_t i = 0; i < gold.size(); ++i) {
    const std::array<double, 3> g = {gold[i].p_pos, gold[i].p_neg, gold[i].p_amb};
    const std::array<double, 3> p = {pred[i].p_pos, pred[i].p_neg, pred[i].p_amb};
    for (size_t c = 0; c < 3; ++c) {
      const double err = g[c] - p[c];
      abs_sum += std::abs(err);
      sq_sum += err * err;
      pred_cols[c].push_back(p[c]);
      if (rho_against_onehot) {
        const size_t argmax =
            g[0] >= g[1] && g[0] >= g[2] ? 0 : (g[1] >= g[2] ? 1 : 2);
        gold_cols[c].push_back(argmax == c ? 1.0 : 0.0);
      } else {
        gold_cols[c].push_back(g[c]);
      }
    }
  }
  const double n_entries = static_cast<double>(3 * gold.size());
  report.mae = abs_sum / n_entries;
  report.mse = sq_sum / n_entries;
  report.pearson_pos = pearson_columns(gold_cols[0], pred_cols[0]);
  report.pearson_neg = pearson_columns(gold_cols[1], pred_cols[1]);
  report.pearson_amb = pearson_columns(gold_cols[2], pred_cols[2]);
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json o;
  o["weighted_f1"] = report.weighted_f1;
  o["n_items"] = report.n_items;
  o["n_failures"] = report.n_failures;
  ordered_json per_class;
  for (size_t c = 0; c < 3; ++c) {
    ordered_json m;
    m["precision"] = report.per_class[c].precision;
    m["recall"] = report.per_class[c].recall;
    m["f1"] = report.per_class[c].f1;
    m["support"] = report.per_class[c].support;
    per_class[std::string(to_string(kSentimentOrder[c]))] = std::move(m);
  }
  o["per_class"] = std::move(per_class);
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.confusion.counts) rows.push_back(row);
  o["confusion"] = std::move(rows);
  return o.dump(2) + "\n";
}

EvalReport eval_report_from_json(const std::string& text) {
  const auto o = nlohmann::json::parse(text);
  EvalReport report;
  report.weighted_f1 = o.at("weighted_f1").get<double>();
  report.n_items = o.at("n_items").get<size_t>();
  report.n_failures = o.at("n_failures").get<size_t>();
  for (size_t c = 0; c < 3; ++c) {
    const auto& m = o.at("per_class").at(std::string(to_string(kSentimentOrder[c])));
    report.per_class[c].precision = m.at("precision").get<double>();
    report.per_class[c].recall = m.at("recall").get<double>();
    report.per_class[c].f1 = m.at("f1").get<double>();
    report.per_class[c].support = m.at("support").get<long>();
  }
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c)
      report.confusion.counts[r][c] = o.at("confusion").at(r).at(c).get<long>();
  return report;
}

std::string eval_report_to_table(const EvalReport& report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %9s %9s %9s %9s\n", "class", "precision", "recall", "f1",
                "support");
  out << line;
  for (size_t c = 0; c < 3; ++c) {
    const auto& m = report.per_class[c];
    std::snprintf(line, sizeof line, "%-10s %9.4f %9.4f %9.4f %9ld\n",
                  std::string(to_string(kSentimentOrder[c])).c_str(), m.precision, m.recall, m.f1,
                  m.support);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-10s %39.4f\n", "weighted", report.weighted_f1);
  out << line;
  std::snprintf(line, sizeof line, "items %zu, failures %zu\n", report.n_items, report.n_failures);
  out << line;
  return out.str();
}

std::string distribution_report_to_json(const DistributionEvalReport& report) {
  using nlohmann::ordered_json;
  ordered_json o;
  o["mae"] = report.mae;
  o["mse"] = report.mse;
  const auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) o[key] = *v;
    else o[key] = nullptr;
  };
  put("pearson_pos", report.pearson_pos);
  put("pearson_amb", report.pearson_amb);
  put("pearson_neg", report.pearson_neg);
  o["n_items"] = report.n_items;
  o["n_failures"] = report.n_failures;
  return o.dump(2) + "\n";
}

std::string distribution_report_to_table(const DistributionEvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%9s %9s %9s %9s %9s\n", "MAE", "MSE", "rhoPos", "rhoAmb",
                "rhoNeg");
  out << line;
  const auto fmt = [](const std::optional<double>& v) {
    char buf[16];
    if (v) std::snprintf(buf, sizeof buf, "%9.4f", *v);
    else std::snprintf(buf, sizeof buf, "%9s", "n/a");
    return std::string(buf);
  };
  std::snprintf(line, sizeof line, "%9.4f %9.4f %s %s %s\n", report.mae, report.mse,
                fmt(report.pearson_pos).c_str(), fmt(report.pearson_amb).c_str(),
                fmt(report.pearson_neg).c_str());
  out << line;
  return out.str();
}

}  // namespace paremia
