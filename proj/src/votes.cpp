#include "paremia/votes.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "paremia/csv.hpp"
#include "paremia/errors.hpp"

namespace paremia {

std::string_view to_string(OrdinalLabel label) {
  switch (label) {
    case OrdinalLabel::StronglyPositive: return "StronglyPositive";
    case OrdinalLabel::MostlyPositive: return "MostlyPositive";
    case OrdinalLabel::StronglyAmbiguous: return "StronglyAmbiguous";
    case OrdinalLabel::MostlyAmbiguous: return "MostlyAmbiguous";
    case OrdinalLabel::MostlyNegative: return "MostlyNegative";
    default: return "StronglyNegative";
  }
}

std::optional<OrdinalLabel> ordinal_from_string(std::string_view s) {
  for (auto label : {OrdinalLabel::StronglyPositive, OrdinalLabel::MostlyPositive,
                     OrdinalLabel::StronglyAmbiguous, OrdinalLabel::MostlyAmbiguous,
                     OrdinalLabel::MostlyNegative, OrdinalLabel::StronglyNegative}) {
    if (to_string(label) == s) return label;
  }
  return std::nullopt;
}

SentimentDistribution vote_distribution(std::span<const AnnotationRecord> records) {
  if (records.empty()) throw DataError("vote_distribution: no records");
  SentimentDistribution dist;
  std::set<std::string_view> voters;
  for (const auto& r : records) {
    if (!r.sentiment)
      throw DataError("vote_distribution: record for '" + r.proverb_id + "' by '" +
                      r.annotator_id + "' has no sentiment label");
    if (!voters.insert(r.annotator_id).second)
      throw DataError("vote_distribution: duplicate annotator '" + r.annotator_id + "'");
    switch (*r.sentiment) {
      case Sentiment::Positive: ++dist.n_pos; break;
      case Sentiment::Negative: ++dist.n_neg; break;
      case Sentiment::Ambiguous: ++dist.n_amb; break;
    }
  }
  return dist;
}

double soft_score(const SentimentDistribution& dist) {
  const long n = dist.n_total();
  if (n == 0) throw DataError("soft_score: empty distribution");
  return static_cast<double>(dist.n_pos - dist.n_neg) / static_cast<double>(n);
}

long strong_threshold(long n_total) { return (10 * n_total + 12) / 13; }
long mostly_threshold(long n_total) { return (7 * n_total + 12) / 13; }

OrdinalLabel ordinal_label(const SentimentDistribution& dist) {
  const long n = dist.n_total();
  if (n == 0) throw DataError("ordinal_label: empty distribution");
  const Sentiment dominant = majority_sentiment(dist.n_pos, dist.n_neg, dist.n_amb);
  const long count = dominant == Sentiment::Positive   ? dist.n_pos
                     : dominant == Sentiment::Negative ? dist.n_neg
                                                       : dist.n_amb;
  // Note the dominant count may sit below the "mostly" threshold; the class
  // still gets a Mostly label (every distribution maps to one of the six).
  const bool strong = count >= strong_threshold(n);
  switch (dominant) {
    case Sentiment::Positive:
      return strong ? OrdinalLabel::StronglyPositive : OrdinalLabel::MostlyPositive;
    case Sentiment::Negative:
      return strong ? OrdinalLabel::StronglyNegative : OrdinalLabel::MostlyNegative;
    default:
      return strong ? OrdinalLabel::StronglyAmbiguous : OrdinalLabel::MostlyAmbiguous;
  }
}

std::vector<OrdinalRow> ordinalize_corpus(const Corpus& corpus,
                                          std::span<const std::string> exclude_annotators) {
  const std::set<std::string_view> excluded(exclude_annotators.begin(), exclude_annotators.end());
  std::map<std::string_view, std::vector<AnnotationRecord>> by_proverb;
  for (const auto& r : corpus.annotations) {
    if (!r.sentiment || excluded.contains(r.annotator_id)) continue;
    by_proverb[r.proverb_id].push_back(r);
  }
  std::vector<OrdinalRow> rows;
  for (const auto& p : corpus.proverbs) {
    const auto it = by_proverb.find(p.id);
    if (it == by_proverb.end()) continue;
    OrdinalRow row;
    row.proverb_id = p.id;
    row.dist = vote_distribution(it->second);
    row.soft = soft_score(row.dist);
    row.label = ordinal_label(row.dist);
    row.majority = majority_sentiment(row.dist.n_pos, row.dist.n_neg, row.dist.n_amb);
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_ordinal_csv(std::span<const OrdinalRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "proverb_id,n_pos,n_neg,n_amb,soft_score,ordinal_label\n";
  char soft[32];
  for (const auto& r : rows) {
    std::snprintf(soft, sizeof soft, "%.6f", r.soft);
    out << csv::join({r.proverb_id, std::to_string(r.dist.n_pos), std::to_string(r.dist.n_neg),
                      std::to_string(r.dist.n_amb), soft, std::string(to_string(r.label))})
        << "\n";
  }
}

std::vector<OrdinalRow> load_ordinal_csv(const std::string& path) {
  const auto rows = csv::parse_file(path);
  if (rows.empty()) throw DataError(path + ": missing header row");
  std::vector<OrdinalRow> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != 6)
      throw DataError(path + ":" + std::to_string(rows[i].line) + ": expected 6 fields");
    OrdinalRow row;
    row.proverb_id = f[0];
    const auto num = [&](const std::string& s) {
      long v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError(path + ":" + std::to_string(rows[i].line) + ": bad count '" + s + "'");
      return v;
    };
    row.dist.n_pos = num(f[1]);
    row.dist.n_neg = num(f[2]);
    row.dist.n_amb = num(f[3]);
    row.soft = std::stod(f[4]);
    const auto label = ordinal_from_string(f[5]);
    if (!label)
      throw DataError(path + ":" + std::to_string(rows[i].line) + ": bad ordinal label '" + f[5] + "'");
    row.label = *label;
    row.majority = majority_sentiment(row.dist.n_pos, row.dist.n_neg, row.dist.n_amb);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace paremia
