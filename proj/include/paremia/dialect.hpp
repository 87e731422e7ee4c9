#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"

namespace paremia {

// Unit-cost edit distance over Unicode scalar values. Callers hand in text
// already put through normalize_text with the flags they intend to match
// under (match_corpora does so internally).
uint32_t levenshtein(std::string_view a, std::string_view b);
uint32_t levenshtein_codepoints(std::span<const uint32_t> a, std::span<const uint32_t> b);

struct EditOp {
  enum class Type : int8_t { Keep, Substitute, Insert, Delete };
  Type type = Type::Keep;
  uint32_t from = 0;  // source code point (Keep, Substitute, Delete)
  uint32_t to = 0;    // target code point (Keep, Substitute, Insert)
};

struct EditScript {
  std::vector<EditOp> ops;

  size_t edit_count() const;       // non-Keep ops == levenshtein distance
  std::string apply_to_source() const;  // reconstructs the target
  std::string source() const;
  std::string target() const;
};

// One optimal script via DP backtrace; ties prefer Keep/Substitute over
// Delete over Insert.
EditScript edit_alignment(std::string_view a, std::string_view b);

struct MatchResult {
  std::string standard_id;
  std::string localized_id;
  uint32_t distance = 0;
  double normalized_distance = 0.0;  // distance / max(|a|, |b|) code points
  std::optional<std::string> place;
};

struct MatchOptions {
  double max_norm_dist = 0.35;
  // Interpret the threshold as an absolute distance instead.
  bool absolute_threshold = false;
  // Matching compares case-folded, diacritic-stripped text; display
  // alignment stays on the original forms.
  int threads = 0;  // 0 = hardware concurrency
};

// For every localized proverb, the nearest standard proverb, kept when it
// passes the threshold. Nearest ties go to the lower standard id; each
// localized proverb matches at most one standard. Output sorted by
// (localized_id, standard_id), independent of input order.
std::vector<MatchResult> match_corpora(const Corpus& standards, const Corpus& localized,
                                       const MatchOptions& options = {});

// match report: standard_id,localized_id,place,distance,normalized_distance
void save_match_csv(std::span<const MatchResult> matches, const std::string& path);

// Diff of the target with the three highlight categories: substitutions
// red, insertions green, deletions red background.
std::string render_diff_ansi(const EditScript& script);
std::string render_diff_html(const EditScript& script);

}  // namespace paremia
