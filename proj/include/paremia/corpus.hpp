#pragma once

#include <optional>
#include <string>
#include <vector>

#include "paremia/sentiment.hpp"

namespace paremia {

enum class Variety : int8_t { Standard, Localized };

std::string_view to_string(Variety v);
std::optional<Variety> variety_from_string(std::string_view s);

struct Proverb {
  std::string id;
  std::string text;
  Variety variety = Variety::Standard;
  std::vector<std::string> topics;
  std::optional<std::string> place;
  std::optional<double> lat;  // degrees, [-90, 90]; present iff lon present
  std::optional<double> lon;  // degrees, [-180, 180]
  std::optional<std::string> source;
};

struct AnnotationRecord {
  std::string proverb_id;
  std::string annotator_id;
  std::optional<bool> seen_before;
  std::optional<Sentiment> sentiment;
  std::vector<std::string> emotions;  // members of the 47-label vocabulary
};

struct Corpus {
  std::vector<Proverb> proverbs;
  std::vector<AnnotationRecord> annotations;
  std::vector<std::string> annotator_ids;  // every annotator, first-seen order

  const Proverb* find(std::string_view id) const;
};

enum class FileFormat { Csv, Jsonl };
std::optional<FileFormat> format_from_string(std::string_view s);

// Proverb file columns: id,text,variety,topics,place,lat,lon,source
// (topics ';'-separated). Annotation file columns:
// proverb_id,annotator_id,seen_before,sentiment,emotions (';'-separated).
// JSONL mirrors the field names, one object per line. Everything UTF-8.
Corpus load_corpus(const std::string& path, FileFormat format);

// Annotation records appended into an existing corpus (ids must resolve).
void load_annotations(const std::string& path, FileFormat format, Corpus& corpus);
std::vector<AnnotationRecord> load_annotation_records(const std::string& path, FileFormat format);
void attach_annotations(std::vector<AnnotationRecord> records, Corpus& corpus);

void save_corpus(const Corpus& corpus, const std::string& path, FileFormat format);
void save_annotations(const std::vector<AnnotationRecord>& records, const std::string& path,
                      FileFormat format);

// Topic counts sorted by descending count, ties lexicographic, truncated
// to top_n entries.
std::vector<std::pair<std::string, size_t>> topic_frequencies(const Corpus& corpus, size_t top_n);

}  // namespace paremia
