#include "paremia/emotions.hpp"

#include <array>
#include <map>
#include <set>

#include "paremia/corpus.hpp"
#include "paremia/errors.hpp"

namespace paremia {

namespace {

// 47 labels, in the order the annotation guidelines present them.
constexpr std::array<std::string_view, 47> kVocabulary = {
    "Absence",
    "Irony",
    "Contempt",
    "Complaint",
    "Worry",
    "Resentment",
    "Alertness / Vigilance",
    "Satisfaction",
    "Despair",
    "Gratitude",
    "Joy",
    "Nostalgia",
    "Anger",
    "Desire",
    "Sadness",
    "Pain",
    "Hatred",
    "Fear / Terror",
    "Love",
    "Relief",
    "Secrecy / Secretiveness",
    "Pleasure",
    "Scorn",
    "Suspicion",
    "Confusion / Nervousness",
    "Foolishness",
    "Trust",
    "Optimism",
    "Annoyance",
    "Surprise / Shock",
    "Admiration",
    "Enthusiasm",
    "Disappointment",
    "Inadequacy",
    "Anticipation / Impatience",
    "Tension",
    "Inspiration / Motivation",
    "Determination",
    "Jealousy",
    "Bitterness",
    "Embarrassment",
    "Shame",
    "Calmness",
    "Hope",
    "Malice",
    "Acceptance",
    "Willingness",
};

constexpr std::array<std::string_view, 15> kPositive = {
    "Satisfaction", "Gratitude", "Joy", "Love", "Relief", "Pleasure", "Trust", "Optimism",
    "Admiration", "Enthusiasm", "Inspiration / Motivation", "Determination", "Calmness", "Hope",
    "Willingness"};

constexpr std::array<std::string_view, 7> kNeutral = {
    "Absence", "Alertness / Vigilance", "Nostalgia", "Desire", "Surprise / Shock",
    "Anticipation / Impatience", "Acceptance"};

const std::map<std::string_view, EmotionGroup>& group_table() {
  static const std::map<std::string_view, EmotionGroup> table = [] {
    std::map<std::string_view, EmotionGroup> t;
    for (auto name : kVocabulary) t.emplace(name, EmotionGroup::Negative);
    for (auto name : kPositive) t.at(name) = EmotionGroup::Positive;
    for (auto name : kNeutral) t.at(name) = EmotionGroup::Neutral;
    return t;
  }();
  return table;
}

}  // namespace

std::span<const std::string_view> emotion_vocabulary() { return kVocabulary; }

bool is_known_emotion(std::string_view name) { return group_table().contains(name); }

std::optional<EmotionGroup> emotion_group(std::string_view name) {
  const auto& table = group_table();
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

Sentiment map_emotions_to_sentiment(std::span<const std::string> emotions) {
  if (emotions.empty()) throw DataError("cannot map an empty emotion set to sentiment");
  long n_pos = 0, n_neg = 0, n_amb = 0;
  for (const auto& name : emotions) {
    const auto group = emotion_group(name);
    if (!group) throw DataError("unknown emotion label: '" + name + "'");
    switch (*group) {
      case EmotionGroup::Positive: ++n_pos; break;
      case EmotionGroup::Negative: ++n_neg; break;
      case EmotionGroup::Neutral: ++n_amb; break;
    }
  }
  return majority_sentiment(n_pos, n_neg, n_amb);
}

SelfAgreement self_agreement(std::span<const AnnotationRecord> sentiment_records,
                             std::span<const AnnotationRecord> emotion_records) {
  std::map<std::pair<std::string, std::string>, Sentiment> direct;
  for (const auto& r : sentiment_records) {
    if (r.sentiment) direct.emplace(std::make_pair(r.proverb_id, r.annotator_id), *r.sentiment);
  }

  std::map<std::string, std::pair<long, long>> consistent_over_total;
  for (const auto& r : emotion_records) {
    if (r.emotions.empty()) continue;
    const auto it = direct.find({r.proverb_id, r.annotator_id});
    if (it == direct.end()) continue;
    auto& [consistent, total] = consistent_over_total[r.annotator_id];
    ++total;
    if (map_emotions_to_sentiment(r.emotions) == it->second) ++consistent;
  }
  if (consistent_over_total.empty())
    throw DataError("self-agreement: no (proverb, annotator) pair overlaps between the two tasks");

  SelfAgreement out;
  double sum = 0.0;
  for (const auto& [annotator, counts] : consistent_over_total) {
    const double pct = 100.0 * static_cast<double>(counts.first) / static_cast<double>(counts.second);
    out.per_annotator.emplace_back(annotator, pct);
    sum += pct;
  }
  out.mean_percent = sum / static_cast<double>(out.per_annotator.size());
  return out;
}

}  // namespace paremia
