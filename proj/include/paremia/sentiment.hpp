#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace paremia {

enum class Sentiment : int8_t { Positive = 0, Negative = 1, Ambiguous = 2 };

// Canonical class order used by confusion matrices and reports.
inline constexpr std::array<Sentiment, 3> kSentimentOrder = {
    Sentiment::Positive, Sentiment::Negative, Sentiment::Ambiguous};

constexpr std::string_view to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return "Positive";
    case Sentiment::Negative: return "Negative";
    default: return "Ambiguous";
  }
}

// Exact-match parse; case handling is the caller's concern (see prompting).
constexpr std::optional<Sentiment> sentiment_from_string(std::string_view s) {
  if (s == "Positive") return Sentiment::Positive;
  if (s == "Negative") return Sentiment::Negative;
  if (s == "Ambiguous") return Sentiment::Ambiguous;
  return std::nullopt;
}

// Numeric rating encoding shared by soft scores, correlations and LVS.
constexpr int sentiment_rating(Sentiment s) {
  switch (s) {
    case Sentiment::Positive: return 1;
    case Sentiment::Negative: return -1;
    default: return 0;
  }
}

// Majority class of a vote triple; any tie for the maximum is Ambiguous.
constexpr Sentiment majority_sentiment(long n_pos, long n_neg, long n_amb) {
  if (n_pos > n_neg && n_pos > n_amb) return Sentiment::Positive;
  if (n_neg > n_pos && n_neg > n_amb) return Sentiment::Negative;
  return Sentiment::Ambiguous;
}

}  // namespace paremia
