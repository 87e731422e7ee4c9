#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"
#include "paremia/emotions.hpp"

namespace paremia {

// Items x annotators grid of optional integer ratings. Sentiment uses the
// -1/0/+1 encoding (Negative/Ambiguous/Positive); nominal statistics treat
// the codes as categories.
struct AnnotationMatrix {
  std::vector<std::string> items;
  std::vector<std::string> annotators;
  std::vector<std::optional<int>> cells;  // row-major, items x annotators

  std::optional<int>& at(size_t item, size_t annotator) {
    return cells[item * annotators.size() + annotator];
  }
  const std::optional<int>& at(size_t item, size_t annotator) const {
    return cells[item * annotators.size() + annotator];
  }

  std::optional<size_t> annotator_index(std::string_view id) const;

  // Direct sentiment labels, item order = corpus proverb order.
  static AnnotationMatrix sentiment(const Corpus& corpus);
  // Emotion sets reduced to sentiment via the guideline mapping.
  static AnnotationMatrix emosent(const Corpus& corpus);

  AnnotationMatrix without_annotators(std::span<const std::string> ids) const;
};

// Cohen's kappa over two label vectors with pairwise deletion of missing
// positions; requires >= 2 overlapping items.
double cohen_kappa(std::span<const std::optional<int>> a, std::span<const std::optional<int>> b);

// Pairwise kappa for every annotator pair; diagonal = 1; entries with < 2
// overlapping items are undefined.
std::vector<std::optional<double>> kappa_matrix(const AnnotationMatrix& m);

// Krippendorff's alpha, nominal level, coincidence-matrix formulation with
// missing cells permitted. Throws DataError when no item has >= 2 labels.
double krippendorff_alpha(const AnnotationMatrix& m);

enum class CorrelationMethod { Pearson, Spearman };

// Symmetric annotator x annotator matrix; Spearman is Pearson over average
// mid-ranks. A pair with < 3 overlapping items or zero variance on either
// side is undefined and excluded from means.
std::vector<std::optional<double>> correlation_matrix(const AnnotationMatrix& m,
                                                      CorrelationMethod method);

// Mean off-diagonal value per annotator, skipping undefined entries.
std::vector<std::optional<double>> mean_offdiagonal(std::span<const std::optional<double>> matrix,
                                                    size_t n);

// Annotators whose mean off-diagonal correlation falls below the threshold,
// worst (smallest mean) first.
std::vector<std::string> flag_outlier_annotators(const AnnotationMatrix& m,
                                                 std::span<const std::optional<double>> corr,
                                                 double min_mean_corr);

struct AgreementReport {
  std::vector<std::string> annotators;
  double kappa_mean = 0.0;  // unweighted mean of defined pairwise kappas
  double alpha = 0.0;
  double pearson_mean = 0.0;
  double spearman_mean = 0.0;
  std::vector<std::optional<double>> kappa_pairwise;
  std::vector<std::optional<double>> pearson_pairwise;
  std::vector<std::optional<double>> spearman_pairwise;
  std::vector<std::string> flagged_annotators;
  std::optional<SelfAgreement> self_agreement;
};

AgreementReport agreement_report(const AnnotationMatrix& m, double min_mean_corr);

std::string agreement_report_to_json(const AgreementReport& report);

}  // namespace paremia
