#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paremia/sentiment.hpp"

namespace paremia {

// Sentiment group of an emotion label. Neutral is the middle group of the
// emotion guidelines; the sentiment task calls the middle class Ambiguous,
// and the two are identified wherever labels meet.
enum class EmotionGroup : int8_t { Positive, Neutral, Negative };

// The closed 47-label emotion vocabulary, in guideline order.
std::span<const std::string_view> emotion_vocabulary();

bool is_known_emotion(std::string_view name);

// Total mapping over the vocabulary: 15 positive, 7 neutral, 25 negative.
std::optional<EmotionGroup> emotion_group(std::string_view name);

// Majority sentiment of a nonempty emotion set (Neutral counts as
// Ambiguous); any tie for the maximum is Ambiguous.
// Throws DataError on an empty set or an unknown label.
Sentiment map_emotions_to_sentiment(std::span<const std::string> emotions);

struct SelfAgreement {
  // annotator id -> percent of overlapping proverbs where the mapped
  // emotion sentiment equals the directly annotated sentiment.
  std::vector<std::pair<std::string, double>> per_annotator;
  double mean_percent = 0.0;
};

struct AnnotationRecord;

// Consistency between the sentiment task and the emotion task, over
// (proverb, annotator) pairs present in both with a sentiment label and a
// nonempty emotion set. Throws DataError when no pair overlaps.
SelfAgreement self_agreement(std::span<const AnnotationRecord> sentiment_records,
                             std::span<const AnnotationRecord> emotion_records);

}  // namespace paremia
