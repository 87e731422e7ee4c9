#include "paremia/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "paremia/csv.hpp"
#include "paremia/emotions.hpp"
#include "paremia/errors.hpp"
#include "paremia/text.hpp"

namespace paremia {

namespace {

using nlohmann::ordered_json;

constexpr std::array<std::string_view, 8> kProverbColumns = {
    "id", "text", "variety", "topics", "place", "lat", "lon", "source"};
constexpr std::array<std::string_view, 5> kAnnotationColumns = {
    "proverb_id", "annotator_id", "seen_before", "sentiment", "emotions"};

[[noreturn]] void fail(const std::string& path, size_t line, const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t end = s.find(';', start);
    std::string_view piece = s.substr(start, end == std::string_view::npos ? end : end - start);
    // trim ASCII space around entries
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) out.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out.push_back(';');
    out += items[i];
  }
  return out;
}

double parse_degrees(const std::string& s, const std::string& path, size_t line,
                     std::string_view field, double lo, double hi) {
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(path, line, "field '" + std::string(field) + "': not a number: '" + s + "'");
  if (value < lo || value > hi)
    fail(path, line, "field '" + std::string(field) + "': " + s + " outside [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return value;
}

std::optional<bool> parse_bool(const std::string& s, const std::string& path, size_t line,
                               std::string_view field) {
  if (s.empty()) return std::nullopt;
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(path, line, "field '" + std::string(field) + "': not a boolean: '" + s + "'");
}

Proverb proverb_from_fields(const std::map<std::string_view, std::string>& f,
                            const std::string& path, size_t line) {
  Proverb p;
  p.id = f.at("id");
  if (p.id.empty()) fail(path, line, "field 'id': empty");
  p.text = normalize_text(f.at("text"));
  if (p.text.empty()) fail(path, line, "field 'text': empty after normalization");
  const auto variety = variety_from_string(f.at("variety"));
  if (!variety) fail(path, line, "field 'variety': unknown value '" + f.at("variety") + "'");
  p.variety = *variety;
  p.topics = split_list(f.at("topics"));
  if (!f.at("place").empty()) p.place = f.at("place");
  const bool has_lat = !f.at("lat").empty();
  const bool has_lon = !f.at("lon").empty();
  if (has_lat != has_lon)
    fail(path, line, has_lat ? "field 'lat' present without 'lon'" : "field 'lon' present without 'lat'");
  if (has_lat) {
    p.lat = parse_degrees(f.at("lat"), path, line, "lat", -90.0, 90.0);
    p.lon = parse_degrees(f.at("lon"), path, line, "lon", -180.0, 180.0);
  }
  if (!f.at("source").empty()) p.source = f.at("source");
  return p;
}

AnnotationRecord annotation_from_fields(const std::map<std::string_view, std::string>& f,
                                        const std::string& path, size_t line) {
  AnnotationRecord r;
  r.proverb_id = f.at("proverb_id");
  if (r.proverb_id.empty()) fail(path, line, "field 'proverb_id': empty");
  r.annotator_id = f.at("annotator_id");
  if (r.annotator_id.empty()) fail(path, line, "field 'annotator_id': empty");
  r.seen_before = parse_bool(f.at("seen_before"), path, line, "seen_before");
  if (!f.at("sentiment").empty()) {
    const auto s = sentiment_from_string(f.at("sentiment"));
    if (!s) fail(path, line, "field 'sentiment': unknown value '" + f.at("sentiment") + "'");
    r.sentiment = *s;
  }
  r.emotions = split_list(f.at("emotions"));
  for (const auto& e : r.emotions) {
    if (!is_known_emotion(e)) fail(path, line, "field 'emotions': unknown emotion label '" + e + "'");
  }
  return r;
}

template <size_t N>
std::vector<std::map<std::string_view, std::string>> read_csv_records(
    const std::string& path, const std::array<std::string_view, N>& columns,
    std::vector<size_t>& lines) {
  const auto rows = csv::parse_file(path);
  if (rows.empty()) throw DataError(path + ": missing header row");
  const auto& header = rows.front().fields;
  std::array<size_t, N> index;
  for (size_t c = 0; c < N; ++c) {
    const auto it = std::find(header.begin(), header.end(), std::string(columns[c]));
    if (it == header.end())
      throw DataError(path + ": header is missing column '" + std::string(columns[c]) + "'");
    index[c] = static_cast<size_t>(it - header.begin());
  }
  std::vector<std::map<std::string_view, std::string>> records;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::map<std::string_view, std::string> f;
    for (size_t c = 0; c < N; ++c) {
      if (index[c] >= row.fields.size())
        fail(path, row.line, "row has " + std::to_string(row.fields.size()) +
                                 " fields, column '" + std::string(columns[c]) + "' missing");
      f[columns[c]] = row.fields[index[c]];
    }
    records.push_back(std::move(f));
    lines.push_back(row.line);
  }
  return records;
}

std::string json_string_field(const ordered_json& obj, std::string_view key, const std::string& path,
                              size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return "";
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number()) {
    std::ostringstream os;
    os << *it;
    return os.str();
  }
  if (it->is_boolean()) return it->get<bool>() ? "true" : "false";
  if (it->is_array()) {
    std::vector<std::string> items;
    for (const auto& v : *it) {
      if (!v.is_string()) fail(path, line, "field '" + std::string(key) + "': non-string array entry");
      items.push_back(v.get<std::string>());
    }
    return join_list(items);
  }
  fail(path, line, "field '" + std::string(key) + "': unsupported JSON type");
}

template <size_t N>
std::vector<std::map<std::string_view, std::string>> read_jsonl_records(
    const std::string& path, const std::array<std::string_view, N>& columns,
    std::vector<size_t>& lines) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::map<std::string_view, std::string>> records;
  std::string raw;
  size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.empty() || raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json obj;
    try {
      obj = ordered_json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      fail(path, line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail(path, line, "expected a JSON object");
    std::map<std::string_view, std::string> f;
    for (auto col : columns) f[col] = json_string_field(obj, col, path, line);
    records.push_back(std::move(f));
    lines.push_back(line);
  }
  return records;
}

ordered_json proverb_to_json(const Proverb& p) {
  ordered_json o;
  o["id"] = p.id;
  o["text"] = p.text;
  o["variety"] = std::string(to_string(p.variety));
  o["topics"] = p.topics;
  if (p.place) o["place"] = *p.place;
  if (p.lat) o["lat"] = *p.lat;
  if (p.lon) o["lon"] = *p.lon;
  if (p.source) o["source"] = *p.source;
  return o;
}

ordered_json annotation_to_json(const AnnotationRecord& r) {
  ordered_json o;
  o["proverb_id"] = r.proverb_id;
  o["annotator_id"] = r.annotator_id;
  if (r.seen_before) o["seen_before"] = *r.seen_before;
  if (r.sentiment) o["sentiment"] = std::string(to_string(*r.sentiment));
  o["emotions"] = r.emotions;
  return o;
}

}  // namespace

std::string_view to_string(Variety v) {
  return v == Variety::Standard ? "Standard" : "Localized";
}

std::optional<Variety> variety_from_string(std::string_view s) {
  if (s == "Standard" || s == "standard") return Variety::Standard;
  if (s == "Localized" || s == "localized") return Variety::Localized;
  return std::nullopt;
}

std::optional<FileFormat> format_from_string(std::string_view s) {
  if (s == "csv" || s == "CSV") return FileFormat::Csv;
  if (s == "jsonl" || s == "JSONL") return FileFormat::Jsonl;
  return std::nullopt;
}

const Proverb* Corpus::find(std::string_view id) const {
  for (const auto& p : proverbs)
    if (p.id == id) return &p;
  return nullptr;
}

Corpus load_corpus(const std::string& path, FileFormat format) {
  std::vector<size_t> lines;
  const auto records = format == FileFormat::Csv
                           ? read_csv_records(path, kProverbColumns, lines)
                           : read_jsonl_records(path, kProverbColumns, lines);
  Corpus corpus;
  std::set<std::string> seen;
  for (size_t i = 0; i < records.size(); ++i) {
    Proverb p = proverb_from_fields(records[i], path, lines[i]);
    if (!seen.insert(p.id).second) fail(path, lines[i], "duplicate proverb id '" + p.id + "'");
    corpus.proverbs.push_back(std::move(p));
  }
  return corpus;
}

std::vector<AnnotationRecord> load_annotation_records(const std::string& path, FileFormat format) {
  std::vector<size_t> lines;
  const auto records = format == FileFormat::Csv
                           ? read_csv_records(path, kAnnotationColumns, lines)
                           : read_jsonl_records(path, kAnnotationColumns, lines);
  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < records.size(); ++i) {
    AnnotationRecord r = annotation_from_fields(records[i], path, lines[i]);
    if (!seen.emplace(r.proverb_id, r.annotator_id).second)
      fail(path, lines[i],
           "duplicate annotation for (" + r.proverb_id + ", " + r.annotator_id + ")");
    out.push_back(std::move(r));
  }
  return out;
}

void attach_annotations(std::vector<AnnotationRecord> records, Corpus& corpus) {
  std::set<std::string_view> ids;
  for (const auto& p : corpus.proverbs) ids.insert(p.id);
  std::set<std::string_view> known_annotators(corpus.annotator_ids.begin(),
                                              corpus.annotator_ids.end());
  for (auto& r : records) {
    if (!ids.contains(r.proverb_id))
      throw DataError("annotation references unknown proverb id '" + r.proverb_id + "'");
    if (!known_annotators.contains(r.annotator_id)) {
      corpus.annotator_ids.push_back(r.annotator_id);
      known_annotators.insert(corpus.annotator_ids.back());
    }
    corpus.annotations.push_back(std::move(r));
  }
}

void load_annotations(const std::string& path, FileFormat format, Corpus& corpus) {
  attach_annotations(load_annotation_records(path, format), corpus);
}

void save_corpus(const Corpus& corpus, const std::string& path, FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  if (format == FileFormat::Csv) {
    std::vector<std::string> header(kProverbColumns.begin(), kProverbColumns.end());
    out << csv::join(header) << "\n";
    for (const auto& p : corpus.proverbs) {
      const auto fmt = [](std::optional<double> v) {
        if (!v) return std::string();
        std::ostringstream os;
        os.precision(17);
        os << *v;
        return os.str();
      };
      out << csv::join({p.id, p.text, std::string(to_string(p.variety)), join_list(p.topics),
                        p.place.value_or(""), fmt(p.lat), fmt(p.lon), p.source.value_or("")})
          << "\n";
    }
  } else {
    for (const auto& p : corpus.proverbs) out << proverb_to_json(p).dump() << "\n";
  }
}

void save_annotations(const std::vector<AnnotationRecord>& records, const std::string& path,
                      FileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  if (format == FileFormat::Csv) {
    std::vector<std::string> header(kAnnotationColumns.begin(), kAnnotationColumns.end());
    out << csv::join(header) << "\n";
    for (const auto& r : records) {
      out << csv::join({r.proverb_id, r.annotator_id,
                        r.seen_before ? (*r.seen_before ? "true" : "false") : "",
                        r.sentiment ? std::string(to_string(*r.sentiment)) : "",
                        join_list(r.emotions)})
          << "\n";
    }
  } else {
    for (const auto& r : records) out << annotation_to_json(r).dump() << "\n";
  }
}

std::vector<std::pair<std::string, size_t>> topic_frequencies(const Corpus& corpus, size_t top_n) {
  std::map<std::string, size_t> counts;
  for (const auto& p : corpus.proverbs)
    for (const auto& t : p.topics) ++counts[t];
  std::vector<std::pair<std::string, size_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

}  // namespace paremia
