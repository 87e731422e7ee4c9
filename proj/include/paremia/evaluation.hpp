#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/prompting.hpp"
#include "paremia/sentiment.hpp"

namespace paremia {

// 3x3 counts, rows = gold, columns = predicted, class order
// Positive, Negative, Ambiguous.
struct ConfusionMatrix {
  std::array<std::array<long, 3>, 3> counts{};

  long& at(Sentiment gold, Sentiment pred) {
    return counts[static_cast<size_t>(gold)][static_cast<size_t>(pred)];
  }
  long at(Sentiment gold, Sentiment pred) const {
    return counts[static_cast<size_t>(gold)][static_cast<size_t>(pred)];
  }
  long total() const;
  long gold_support(Sentiment s) const;
};

ConfusionMatrix confusion_matrix(std::span<const Sentiment> gold, std::span<const Sentiment> pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct EvalReport {
  double weighted_f1 = 0.0;
  std::array<ClassMetrics, 3> per_class{};  // kSentimentOrder
  ConfusionMatrix confusion;
  size_t n_items = 0;
  size_t n_failures = 0;
};

// Support-weighted mean of per-class F1; 0/0 ratios count as 0.
double weighted_f1(std::span<const Sentiment> gold, std::span<const Sentiment> pred);

EvalReport evaluate_labels(std::span<const Sentiment> gold, std::span<const Sentiment> pred,
                           size_t n_failures = 0);

// Failed predictions are excluded from the metrics and counted (default),
// or scored as `fallback` when provided.
EvalReport evaluate_outcomes(std::span<const Sentiment> gold,
                             std::span<const std::optional<Sentiment>> pred,
                             std::optional<Sentiment> fallback = std::nullopt);

struct DistributionEvalReport {
  double mae = 0.0;  // averaged over items x 3 classes
  double mse = 0.0;
  std::optional<double> pearson_pos;
  std::optional<double> pearson_neg;
  std::optional<double> pearson_amb;
  size_t n_items = 0;
  size_t n_failures = 0;
};

// MAE/MSE over all entries; per-class Pearson across items (undefined on
// zero variance). With rho_against_onehot the gold columns are the one-hot
// majority classes instead of the vote fractions.
DistributionEvalReport distribution_errors(std::span<const Distribution> gold,
                                           std::span<const Distribution> pred,
                                           bool rho_against_onehot = false);

std::string eval_report_to_json(const EvalReport& report);
EvalReport eval_report_from_json(const std::string& text);
std::string eval_report_to_table(const EvalReport& report);

std::string distribution_report_to_json(const DistributionEvalReport& report);
std::string distribution_report_to_table(const DistributionEvalReport& report);

}  // namespace paremia
