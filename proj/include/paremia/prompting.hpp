#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/errors.hpp"
#include "paremia/sentiment.hpp"
#include "paremia/shots.hpp"

namespace paremia {

enum class TechniqueKind { Z0, Zb, Zp, FewShot };
enum class ShotStrategy { RP, LVS, DYN };
enum class PromptLanguage { Greek, English };

std::string_view to_string(ShotStrategy s);
std::optional<ShotStrategy> strategy_from_string(std::string_view s);

struct PromptSpec {
  TechniqueKind kind = TechniqueKind::Z0;
  int batch_size = 0;  // Zb only, one of {10, 20, 30}
  int k = 0;           // FewShot only, one of {1, 2, 3}
  ShotStrategy strategy = ShotStrategy::RP;
  PromptLanguage language = PromptLanguage::Greek;
  bool grouped_shots = false;  // default interleaves classes P,N,A,P,N,A,...

  void validate() const;  // throws ConfigError on invariant violations
  // Stable identifier used in cache keys and reports: "z0", "zb20", "zp",
  // "fs2-lvs"; "-en" suffix for English payloads.
  std::string technique_tag() const;
};

// Prompt templates with {batch_number}, {proverb}, {proverbs} and
// {examples} placeholders. A templates directory may override any of
// z0.txt, zb.txt, zp.txt, fewshot.txt; files are used byte-for-byte.
struct PromptTemplates {
  std::string z0;
  std::string zb;
  std::string zp;
  std::string fewshot;

  static const PromptTemplates& builtin();
  static PromptTemplates from_directory(const std::string& dir);
};

// Byte-exact template instantiation. Zb expects 1..batch_size proverbs (a
// trailing short batch renders its own count); everything else exactly one.
// Shots must be present iff the technique is FewShot.
std::string build_prompt(const PromptSpec& spec, std::span<const std::string> proverbs,
                         const ShotSet* shots = nullptr,
                         const PromptTemplates& templates = PromptTemplates::builtin());

struct ParseFailure : DataError {
  enum class Kind {
    NoLabel,
    AmbiguousResponse,
    CountMismatch,
    BadToken,
    MissingClass,
    SumOutOfRange,
    NegativeValue,
  };
  Kind kind;
  ParseFailure(Kind kind, const std::string& message) : DataError(message), kind(kind) {}
};

enum class ParseMode { Strict, Tolerant };

// Strict: exactly one label modulo surrounding whitespace. Tolerant: also
// case-folds, accepts one trailing period, and falls back to the single
// standalone label word when exactly one distinct label word occurs.
Sentiment parse_label(std::string_view response, ParseMode mode);

// Splits on commas/newlines, parses each token tolerantly; the token count
// must equal expected_n.
std::vector<Sentiment> parse_batch_labels(std::string_view response, size_t expected_n);

struct Distribution {
  double p_pos = 0.0;
  double p_neg = 0.0;
  double p_amb = 0.0;
};

// Extracts the three named percentages (order-insensitive, '%' optional);
// renormalizes when the sum is within 100 +- 5, errors otherwise.
Distribution parse_percentages(std::string_view response);

struct ModelPrediction {
  enum class Kind { Label, Labels, Distribution };
  Kind kind = Kind::Label;
  std::optional<Sentiment> label;
  std::vector<Sentiment> labels;
  std::optional<paremia::Distribution> distribution;
  std::string raw;
};

}  // namespace paremia
