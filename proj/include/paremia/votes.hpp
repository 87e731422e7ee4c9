#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"
#include "paremia/sentiment.hpp"

namespace paremia {

struct SentimentDistribution {
  long n_pos = 0;
  long n_neg = 0;
  long n_amb = 0;

  long n_total() const { return n_pos + n_neg + n_amb; }
  double frac_pos() const { return n_total() ? static_cast<double>(n_pos) / n_total() : 0.0; }
  double frac_neg() const { return n_total() ? static_cast<double>(n_neg) / n_total() : 0.0; }
  double frac_amb() const { return n_total() ? static_cast<double>(n_amb) / n_total() : 0.0; }
};

enum class OrdinalLabel : int8_t {
  StronglyPositive,
  MostlyPositive,
  StronglyAmbiguous,
  MostlyAmbiguous,
  MostlyNegative,
  StronglyNegative,
};

std::string_view to_string(OrdinalLabel label);
std::optional<OrdinalLabel> ordinal_from_string(std::string_view s);

// Vote counts for one proverb. Every record must carry a sentiment and ids
// must be distinct (one vote per annotator); zero records is an error.
SentimentDistribution vote_distribution(std::span<const AnnotationRecord> records);

// (n_pos - n_neg) / n_total, in [-1, 1].
double soft_score(const SentimentDistribution& dist);

// Six-level ordinal class. Dominant class is the argmax (tie -> Ambiguous);
// the label is Strongly<class> when its count reaches ceil(10/13 * n_total),
// Mostly<class> otherwise. The thresholds reduce to 10 at n_total = 13.
OrdinalLabel ordinal_label(const SentimentDistribution& dist);

long strong_threshold(long n_total);  // ceil(10/13 * n)
long mostly_threshold(long n_total);  // ceil(7/13 * n)

struct OrdinalRow {
  std::string proverb_id;
  SentimentDistribution dist;
  double soft = 0.0;
  OrdinalLabel label = OrdinalLabel::MostlyAmbiguous;
  Sentiment majority = Sentiment::Ambiguous;
};

// Per-proverb vote summary over a corpus, in corpus proverb order; proverbs
// without sentiment annotations are skipped. exclude_annotators removes the
// listed annotators' votes before counting.
std::vector<OrdinalRow> ordinalize_corpus(const Corpus& corpus,
                                          std::span<const std::string> exclude_annotators = {});

// CSV: proverb_id,n_pos,n_neg,n_amb,soft_score,ordinal_label
void save_ordinal_csv(std::span<const OrdinalRow> rows, const std::string& path);
std::vector<OrdinalRow> load_ordinal_csv(const std::string& path);

}  // namespace paremia
