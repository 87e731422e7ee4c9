// paremia: proverb sentiment analytics over corpus files.
//
// Subcommands chain through files: ingest -> iaa -> ordinalize ->
// select-shots -> predict -> evaluate -> match-dialects -> map, each one
// individually invocable with explicit paths, or driven as a staged
// pipeline from a config file via `paremia run`.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "paremia/agreement.hpp"
#include "paremia/corpus.hpp"
#include "paremia/csv.hpp"
#include "paremia/dialect.hpp"
#include "paremia/emotions.hpp"
#include "paremia/errors.hpp"
#include "paremia/evaluation.hpp"
#include "paremia/geomap.hpp"
#include "paremia/kernels/kernels.hpp"
#include "paremia/model_client.hpp"
#include "paremia/prompting.hpp"
#include "paremia/shots.hpp"
#include "paremia/votes.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace paremia;

namespace {

constexpr const char* kVersion = "0.3.0";

int g_verbosity = 1;

void log_info(const std::string& message) {
  if (g_verbosity >= 1) std::cerr << "[paremia] " << message << "\n";
}

void log_debug(const std::string& message) {
  if (g_verbosity >= 2) std::cerr << "[paremia] " << message << "\n";
}

FileFormat parse_format(const std::string& name) {
  const auto format = format_from_string(name);
  if (!format) throw ConfigError("unknown file format: '" + name + "'");
  return *format;
}

FileFormat sniff_format(const std::string& path) {
  if (path.ends_with(".jsonl")) return FileFormat::Jsonl;
  return FileFormat::Csv;
}

Corpus load_corpus_auto(const std::string& path) { return load_corpus(path, sniff_format(path)); }

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ResponseCache::sha256_hex(bytes);
}

// ---------------------------------------------------------------------------
// label files: proverb_id,label CSV

void save_label_csv(const std::vector<std::pair<std::string, Sentiment>>& labels,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << "proverb_id,label\n";
  for (const auto& [id, label] : labels) out << id << "," << to_string(label) << "\n";
}

std::vector<std::pair<std::string, Sentiment>> load_label_csv(const std::string& path) {
  const auto rows = csv::parse_file(path);
  if (rows.empty()) throw DataError(path + ": missing header row");
  std::vector<std::pair<std::string, Sentiment>> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() < 2)
      throw DataError(path + ":" + std::to_string(rows[i].line) + ": expected proverb_id,label");
    const auto s = sentiment_from_string(f[1]);
    if (!s)
      throw DataError(path + ":" + std::to_string(rows[i].line) + ": unknown label '" + f[1] + "'");
    out.emplace_back(f[0], *s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// predictions file: one JSON object per item, aligned with the input corpus

void save_predictions_jsonl(const CorpusPredictions& predictions, const std::string& technique,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& item : predictions.items) {
    ordered_json o;
    o["proverb_id"] = item.proverb_id;
    o["technique"] = technique;
    if (item.prediction) {
      o["status"] = "ok";
      const ModelPrediction& p = *item.prediction;
      switch (p.kind) {
        case ModelPrediction::Kind::Label:
          o["kind"] = "label";
          o["label"] = std::string(to_string(*p.label));
          break;
        case ModelPrediction::Kind::Labels: {
          o["kind"] = "labels";
          std::vector<std::string> labels;
          for (Sentiment s : p.labels) labels.emplace_back(to_string(s));
          o["labels"] = labels;
          break;
        }
        case ModelPrediction::Kind::Distribution:
          o["kind"] = "distribution";
          o["p_pos"] = p.distribution->p_pos;
          o["p_neg"] = p.distribution->p_neg;
          o["p_amb"] = p.distribution->p_amb;
          break;
      }
      o["raw"] = p.raw;
    } else {
      o["status"] = "error";
      o["error"] = item.error.value_or("unknown");
    }
    out << o.dump() << "\n";
  }
}

struct LoadedPrediction {
  std::string proverb_id;
  std::optional<Sentiment> label;
  std::optional<Distribution> distribution;
  bool failed = false;
};

std::vector<LoadedPrediction> load_predictions_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<LoadedPrediction> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ordered_json o;
    try {
      o = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    LoadedPrediction p;
    p.proverb_id = o.at("proverb_id").get<std::string>();
    if (o.value("status", "ok") != "ok") {
      p.failed = true;
    } else if (o.contains("label")) {
      const auto s = sentiment_from_string(o.at("label").get<std::string>());
      if (!s) throw DataError(path + ":" + std::to_string(line_no) + ": unknown label");
      p.label = *s;
    } else if (o.contains("p_pos")) {
      p.distribution = Distribution{o.at("p_pos").get<double>(), o.at("p_neg").get<double>(),
                                    o.at("p_amb").get<double>()};
    } else {
      p.failed = true;
    }
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// shots file

ordered_json shot_set_to_json(const ShotSet& shots) {
  ordered_json classes;
  for (Sentiment s : kSentimentOrder) {
    ordered_json list = ordered_json::array();
    for (const auto& c : shots.of(s)) {
      ordered_json o;
      o["id"] = c.id;
      o["text"] = c.text;
      o["label"] = std::string(to_string(c.label));
      o["rating_variance"] = c.rating_variance;
      list.push_back(std::move(o));
    }
    classes[std::string(to_string(s))] = std::move(list);
  }
  return classes;
}

ShotSet shot_set_from_json(const ordered_json& classes) {
  ShotSet shots;
  for (Sentiment s : kSentimentOrder) {
    for (const auto& o : classes.at(std::string(to_string(s)))) {
      ShotCandidate c;
      c.id = o.at("id").get<std::string>();
      c.text = o.at("text").get<std::string>();
      c.label = *sentiment_from_string(o.at("label").get<std::string>());
      c.rating_variance = o.at("rating_variance").get<double>();
      shots.of(s).push_back(std::move(c));
    }
  }
  return shots;
}

// ---------------------------------------------------------------------------
// pipeline configuration

struct PipelineConfig {
  ordered_json raw;
  std::string out_dir = "out";
  uint64_t seed = 0;
  std::vector<std::string> stages;

  std::string input_path(const std::string& key) const {
    if (!raw.contains("inputs") || !raw.at("inputs").contains(key)) return {};
    const auto& node = raw.at("inputs").at(key);
    if (node.is_string()) return node.get<std::string>();
    return node.value("path", "");
  }
  FileFormat input_format(const std::string& key) const {
    const auto& node = raw.at("inputs").at(key);
    if (node.is_object() && node.contains("format"))
      return parse_format(node.at("format").get<std::string>());
    return sniff_format(input_path(key));
  }
  template <typename T>
  T option(const std::string& section, const std::string& key, T fallback) const {
    if (!raw.contains(section)) return fallback;
    return raw.at(section).value(key, fallback);
  }

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  PipelineConfig config;
  try {
    in >> config.raw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  config.out_dir = config.raw.value("out_dir", "out");
  config.seed = config.raw.value("seed", 0ull);
  if (config.raw.contains("stages"))
    config.stages = config.raw.at("stages").get<std::vector<std::string>>();
  return config;
}

InferenceConfig inference_config_of(const PipelineConfig& config) {
  InferenceConfig inference;
  inference.model_name = config.option<std::string>("model", "name", "default");
  inference.temperature = config.option<double>("model", "temperature", 0.7);
  inference.top_p = config.option<double>("model", "top_p", 0.9);
  inference.max_tokens = config.option<int>("model", "max_tokens", 256);
  inference.timeout_s = config.option<double>("model", "timeout_s", 60.0);
  inference.max_retries = config.option<int>("model", "max_retries", 3);
  inference.parallelism = config.option<int>("model", "parallelism", 4);
  return inference;
}

PromptSpec prompt_spec_of(const PipelineConfig& config) {
  PromptSpec spec;
  const std::string technique = config.option<std::string>("predict", "technique", "z0");
  if (technique == "z0") {
    spec.kind = TechniqueKind::Z0;
  } else if (technique == "zb") {
    spec.kind = TechniqueKind::Zb;
    spec.batch_size = config.option<int>("predict", "batch_size", 10);
  } else if (technique == "zp") {
    spec.kind = TechniqueKind::Zp;
  } else if (technique == "fewshot") {
    spec.kind = TechniqueKind::FewShot;
    spec.k = config.option<int>("shots", "k", 1);
    const std::string strategy = config.option<std::string>("shots", "strategy", "rp");
    const auto parsed = strategy_from_string(strategy);
    if (!parsed) throw ConfigError("unknown shot strategy: '" + strategy + "'");
    spec.strategy = *parsed;
  } else {
    throw ConfigError("unknown technique: '" + technique + "'");
  }
  if (config.option<std::string>("predict", "language", "greek") == "english")
    spec.language = PromptLanguage::English;
  spec.grouped_shots = config.option<bool>("predict", "grouped_shots", false);
  spec.validate();
  return spec;
}

std::unique_ptr<Backend> backend_of(const PipelineConfig& config, const std::string& backend_name) {
  if (backend_name == "mock") {
    std::vector<MockRule> rules;
    if (config.raw.contains("mock_rules")) {
      for (const auto& r : config.raw.at("mock_rules")) {
        const auto label = sentiment_from_string(r.at("label").get<std::string>());
        if (!label) throw ConfigError("mock rule with unknown label");
        rules.push_back({r.at("keyword").get<std::string>(), *label});
      }
    }
    if (rules.empty()) rules.push_back({"χαρά", Sentiment::Positive});
    return make_rule_mock_backend(std::move(rules));
  }
  if (backend_name == "http") {
    const std::string url = config.option<std::string>("model", "url", "");
    if (!url.empty())
      return make_http_backend(url, config.option<std::string>("model", "api_key", ""));
    return make_http_backend_from_env();
  }
  throw ConfigError("unknown backend: '" + backend_name + "' (expected http or mock)");
}

// ---------------------------------------------------------------------------
// stages

struct StagePaths {
  PipelineConfig* config = nullptr;

  std::string standard() const { return config->out("corpus_standard.jsonl").string(); }
  std::string localized() const { return config->out("corpus_localized.jsonl").string(); }
  std::string sentiment_annotations() const {
    return config->out("annotations_sentiment.jsonl").string();
  }
  std::string emotion_annotations() const {
    return config->out("annotations_emotion.jsonl").string();
  }
  std::string agreement() const { return config->out("agreement.json").string(); }
  std::string ordinal() const { return config->out("ordinal.csv").string(); }
  std::string gold_labels() const { return config->out("gold_labels.csv").string(); }
  std::string shots() const { return config->out("shots.json").string(); }
  std::string predictions() const { return config->out("predictions.jsonl").string(); }
  std::string predicted_labels() const { return config->out("predicted_labels.csv").string(); }
  std::string eval_json() const { return config->out("eval.json").string(); }
  std::string eval_table() const { return config->out("eval.txt").string(); }
  std::string matches() const { return config->out("matches.csv").string(); }
  std::string matches_diff() const { return config->out("matches_diff.html").string(); }
  std::string silver_labels() const { return config->out("silver_labels.csv").string(); }
  std::string map_prefix() const { return config->out("map").string(); }
};

Corpus load_standard_with_annotations(const std::string& corpus_path,
                                      const std::string& annotations_path) {
  Corpus corpus = load_corpus_auto(corpus_path);
  if (!annotations_path.empty())
    load_annotations(annotations_path, sniff_format(annotations_path), corpus);
  return corpus;
}

void stage_ingest(PipelineConfig& config) {
  StagePaths paths{&config};
  const auto ingest_corpus = [&](const std::string& key, const std::string& out_path) {
    const std::string in_path = config.input_path(key);
    if (in_path.empty()) return false;
    const Corpus corpus = load_corpus(in_path, config.input_format(key));
    save_corpus(corpus, out_path, FileFormat::Jsonl);
    log_info("ingest: " + key + ": " + std::to_string(corpus.proverbs.size()) + " proverbs");
    return true;
  };
  if (!ingest_corpus("standard", paths.standard()))
    throw ConfigError("ingest: config has no inputs.standard");
  ingest_corpus("localized", paths.localized());

  const auto ingest_annotations = [&](const std::string& key, const std::string& out_path,
                                      const std::string& against) {
    const std::string in_path = config.input_path(key);
    if (in_path.empty()) return;
    Corpus corpus = load_corpus_auto(against);
    const auto records = load_annotation_records(in_path, config.input_format(key));
    attach_annotations(records, corpus);  // validates ids and labels
    save_annotations(records, out_path, FileFormat::Jsonl);
    log_info("ingest: " + key + ": " + std::to_string(records.size()) + " records from " +
             std::to_string(corpus.annotator_ids.size()) + " annotators");
  };
  ingest_annotations("sentiment_annotations", paths.sentiment_annotations(), paths.standard());
  ingest_annotations("emotion_annotations", paths.emotion_annotations(), paths.standard());
}

void stage_iaa(PipelineConfig& config) {
  StagePaths paths{&config};
  if (!fs::exists(paths.sentiment_annotations()))
    throw ConfigError("iaa: no sentiment annotations were ingested (inputs.sentiment_annotations)");
  Corpus corpus = load_standard_with_annotations(paths.standard(), paths.sentiment_annotations());
  const std::string task = config.option<std::string>("iaa", "task", "sentiment");
  AnnotationMatrix matrix = task == "emosent" ? AnnotationMatrix::emosent(corpus)
                                              : AnnotationMatrix::sentiment(corpus);
  const double min_mean_corr = config.option<double>("iaa", "min_mean_corr", 0.15);
  AgreementReport report = agreement_report(matrix, min_mean_corr);
  if (fs::exists(paths.emotion_annotations())) {
    const auto emotion_records =
        load_annotation_records(paths.emotion_annotations(), FileFormat::Jsonl);
    try {
      report.self_agreement = self_agreement(corpus.annotations, emotion_records);
    } catch (const DataError& e) {
      log_info(std::string("iaa: self-agreement skipped: ") + e.what());
    }
  }
  write_text_atomic(paths.agreement(), agreement_report_to_json(report));
  log_info("iaa: alpha=" + std::to_string(report.alpha) +
           ", kappa_mean=" + std::to_string(report.kappa_mean) + ", flagged=" +
           std::to_string(report.flagged_annotators.size()));
}

std::vector<std::string> flagged_from_agreement(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open agreement report: " + path);
  ordered_json o;
  in >> o;
  return o.at("flagged_annotators").get<std::vector<std::string>>();
}

void stage_ordinalize(PipelineConfig& config) {
  StagePaths paths{&config};
  if (!fs::exists(paths.sentiment_annotations()))
    throw ConfigError("ordinalize: no sentiment annotations were ingested");
  Corpus corpus = load_standard_with_annotations(paths.standard(), paths.sentiment_annotations());
  std::vector<std::string> exclude;
  if (config.option<bool>("ordinal", "exclude_flagged", false))
    exclude = flagged_from_agreement(paths.agreement());
  const auto rows = ordinalize_corpus(corpus, exclude);
  save_ordinal_csv(rows, paths.ordinal());
  std::vector<std::pair<std::string, Sentiment>> gold;
  for (const auto& row : rows) gold.emplace_back(row.proverb_id, row.majority);
  save_label_csv(gold, paths.gold_labels());
  log_info("ordinalize: " + std::to_string(rows.size()) + " proverbs");
}

void stage_select_shots(PipelineConfig& config) {
  StagePaths paths{&config};
  if (!fs::exists(paths.sentiment_annotations()))
    throw ConfigError("select-shots: no sentiment annotations were ingested");
  Corpus corpus = load_standard_with_annotations(paths.standard(), paths.sentiment_annotations());
  const auto pool = build_shot_pool(corpus);
  const int k = config.option<int>("shots", "k", 1);
  const std::string strategy = config.option<std::string>("shots", "strategy", "rp");
  ordered_json out;
  out["strategy"] = strategy;
  out["k"] = k;
  if (strategy == "rp") {
    out["classes"] = shot_set_to_json(random_pick(pool, k, config.seed));
  } else if (strategy == "lvs") {
    out["classes"] = shot_set_to_json(low_variance_selection(pool, k));
  } else if (strategy == "dyn") {
    // DYN re-ranks per query at predict time; persist the LVS candidate list
    const int pool_size = config.option<int>("shots", "dyn_pool_size", 10);
    out["classes"] = shot_set_to_json(low_variance_selection(pool, pool_size));
  } else {
    throw ConfigError("unknown shot strategy: '" + strategy + "'");
  }
  write_text_atomic(paths.shots(), out.dump(2) + "\n");
  log_info("select-shots: strategy=" + strategy + " k=" + std::to_string(k));
}

ShotsProvider shots_provider_of(const PipelineConfig& config, const PromptSpec& spec,
                                const std::string& shots_path,
                                std::shared_ptr<Embedder>& embedder_keepalive) {
  if (spec.kind != TechniqueKind::FewShot) return {};
  std::ifstream in(shots_path, std::ios::binary);
  if (!in) throw ConfigError("predict: shots file missing: " + shots_path + " (run select-shots)");
  ordered_json doc;
  in >> doc;
  const ShotSet stored = shot_set_from_json(doc.at("classes"));
  if (spec.strategy == ShotStrategy::DYN) {
    const std::string backend = config.option<std::string>("shots", "embedder", "fallback-trigram");
    const size_t dim = config.option<size_t>("shots", "embed_dim", 256);
    const std::string url = config.option<std::string>("shots", "embedder_url", "");
    embedder_keepalive = make_embedder(backend, dim, url);
    const bool pooled = config.option<bool>("shots", "pooled", false);
    const int k = spec.k;
    Embedder* embedder = embedder_keepalive.get();
    return [stored, embedder, k, pooled](const Proverb& query) {
      return dynamic_selection(query, stored, *embedder, k, pooled,
                               [](const std::string& w) { log_debug(w); });
    };
  }
  return [stored](const Proverb& query) {
    ShotSet filtered = stored;
    for (Sentiment s : kSentimentOrder) {
      auto& list = filtered.of(s);
      std::erase_if(list, [&](const ShotCandidate& c) { return c.id == query.id; });
    }
    return filtered;
  };
}

void stage_predict(PipelineConfig& config, const std::string& backend_name,
                   const std::string& cache_dir) {
  StagePaths paths{&config};
  const std::string target = config.option<std::string>("predict", "target", "standard");
  const std::string corpus_path = target == "localized" ? paths.localized() : paths.standard();
  if (!fs::exists(corpus_path)) throw ConfigError("predict: corpus missing: " + corpus_path);
  const Corpus corpus = load_corpus_auto(corpus_path);

  const PromptSpec spec = prompt_spec_of(config);
  const InferenceConfig inference = inference_config_of(config);
  auto backend = backend_of(config, backend_name);

  std::optional<ResponseCache> cache;
  if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    cache.emplace((fs::path(cache_dir) / "responses.jsonl").string());
  }

  std::shared_ptr<Embedder> embedder;
  const ShotsProvider shots = shots_provider_of(config, spec, paths.shots(), embedder);

  PromptTemplates templates = PromptTemplates::builtin();
  const std::string templates_dir = config.option<std::string>("predict", "templates_dir", "");
  if (!templates_dir.empty()) templates = PromptTemplates::from_directory(templates_dir);

  ModelClient client(*backend, inference, cache ? &*cache : nullptr);
  const CorpusPredictions predictions =
      client.predict_corpus(corpus.proverbs, spec, shots, templates);
  save_predictions_jsonl(predictions, spec.technique_tag(), paths.predictions());

  std::vector<std::pair<std::string, Sentiment>> labels;
  for (const auto& item : predictions.items) {
    if (item.prediction && item.prediction->kind == ModelPrediction::Kind::Label)
      labels.emplace_back(item.proverb_id, *item.prediction->label);
  }
  if (!labels.empty()) save_label_csv(labels, paths.predicted_labels());
  log_info("predict: " + std::to_string(predictions.items.size()) + " items, " +
           std::to_string(predictions.failures) + " failures, " +
           std::to_string(predictions.backend_calls) + " backend calls, " +
           std::to_string(predictions.cache_hits) + " cache hits");
}

void run_label_evaluation(const std::vector<std::pair<std::string, Sentiment>>& gold_list,
                          const std::vector<LoadedPrediction>& predictions,
                          const std::optional<Sentiment>& fallback, const std::string& json_path,
                          const std::string& table_path) {
  std::map<std::string, Sentiment> gold_by_id(gold_list.begin(), gold_list.end());
  std::vector<Sentiment> gold;
  std::vector<std::optional<Sentiment>> pred;
  for (const auto& p : predictions) {
    const auto it = gold_by_id.find(p.proverb_id);
    if (it == gold_by_id.end()) continue;  // predictions beyond the gold set are not scored
    gold.push_back(it->second);
    pred.push_back(p.failed ? std::nullopt : p.label);
  }
  if (gold.empty()) throw DataError("evaluate: no prediction matches a gold proverb id");
  const EvalReport report = evaluate_outcomes(gold, pred, fallback);
  write_text_atomic(json_path, eval_report_to_json(report));
  if (!table_path.empty()) write_text_atomic(table_path, eval_report_to_table(report));
  log_info("evaluate: weighted_f1=" + std::to_string(report.weighted_f1) + " over " +
           std::to_string(report.n_items) + " items (" + std::to_string(report.n_failures) +
           " failures)");
}

void run_distribution_evaluation(const std::vector<OrdinalRow>& ordinal_rows,
                                 const std::vector<LoadedPrediction>& predictions,
                                 bool rho_onehot, const std::string& json_path,
                                 const std::string& table_path) {
  std::map<std::string, Distribution> gold_by_id;
  for (const auto& row : ordinal_rows)
    gold_by_id[row.proverb_id] =
        Distribution{row.dist.frac_pos(), row.dist.frac_neg(), row.dist.frac_amb()};
  std::vector<Distribution> gold, pred;
  size_t failures = 0;
  for (const auto& p : predictions) {
    const auto it = gold_by_id.find(p.proverb_id);
    if (it == gold_by_id.end()) continue;
    if (p.failed || !p.distribution) {
      ++failures;
      continue;
    }
    gold.push_back(it->second);
    pred.push_back(*p.distribution);
  }
  if (gold.empty()) throw DataError("evaluate: no distribution predictions match the gold set");
  DistributionEvalReport report = distribution_errors(gold, pred, rho_onehot);
  report.n_failures = failures;
  write_text_atomic(json_path, distribution_report_to_json(report));
  if (!table_path.empty()) write_text_atomic(table_path, distribution_report_to_table(report));
  log_info("evaluate: mae=" + std::to_string(report.mae) + " mse=" + std::to_string(report.mse));
}

void stage_evaluate(PipelineConfig& config) {
  StagePaths paths{&config};
  const auto predictions = load_predictions_jsonl(paths.predictions());
  const bool distribution_mode =
      std::any_of(predictions.begin(), predictions.end(),
                  [](const LoadedPrediction& p) { return p.distribution.has_value(); });
  const std::string fallback_name = config.option<std::string>("evaluate", "fallback_label", "");
  std::optional<Sentiment> fallback;
  if (!fallback_name.empty()) {
    fallback = sentiment_from_string(fallback_name);
    if (!fallback) throw ConfigError("evaluate: unknown fallback label '" + fallback_name + "'");
  }
  if (distribution_mode) {
    run_distribution_evaluation(load_ordinal_csv(paths.ordinal()), predictions,
                                config.option<bool>("evaluate", "rho_onehot", false),
                                paths.eval_json(), paths.eval_table());
  } else {
    run_label_evaluation(load_label_csv(paths.gold_labels()), predictions, fallback,
                         paths.eval_json(), paths.eval_table());
  }
}

void write_match_diff_html(const Corpus& standards, const Corpus& localized,
                           std::span<const MatchResult> matches, const std::string& path) {
  std::string html =
      "<!doctype html>\n<meta charset=\"utf-8\">\n<style>\n"
      ".sub { color: #c00; }\n"
      ".ins { background: #9f9; }\n"
      ".del { background: #f99; }\n"
      "td { padding: 4px 10px; font-family: serif; }\n"
      "</style>\n<table>\n<tr><th>standard</th><th>localized (diff)</th><th>place</th>"
      "<th>distance</th></tr>\n";
  for (const auto& m : matches) {
    const Proverb* std_p = standards.find(m.standard_id);
    const Proverb* loc_p = localized.find(m.localized_id);
    if (std_p == nullptr || loc_p == nullptr) continue;
    const EditScript script = edit_alignment(std_p->text, loc_p->text);
    html += "<tr><td>" + std_p->text + "</td><td>" + render_diff_html(script) + "</td><td>" +
            m.place.value_or("") + "</td><td>" + std::to_string(m.distance) + "</td></tr>\n";
  }
  html += "</table>\n";
  write_text_atomic(path, html);
}

void stage_match_dialects(PipelineConfig& config) {
  StagePaths paths{&config};
  if (!fs::exists(paths.localized()))
    throw ConfigError("match-dialects: no localized corpus was ingested (inputs.localized)");
  const Corpus standards = load_corpus_auto(paths.standard());
  const Corpus localized = load_corpus_auto(paths.localized());
  MatchOptions options;
  options.max_norm_dist = config.option<double>("match", "max_norm_dist", 0.35);
  options.absolute_threshold = config.option<bool>("match", "absolute", false);
  const auto matches = match_corpora(standards, localized, options);
  save_match_csv(matches, paths.matches());
  write_match_diff_html(standards, localized, matches, paths.matches_diff());
  log_info("match-dialects: " + std::to_string(matches.size()) + " of " +
           std::to_string(localized.proverbs.size()) + " localized proverbs matched");

  // silver labels: matched localized proverbs inherit the standard's label
  if (fs::exists(paths.gold_labels())) {
    const auto gold = load_label_csv(paths.gold_labels());
    const std::map<std::string, Sentiment> gold_by_id(gold.begin(), gold.end());
    std::vector<std::pair<std::string, Sentiment>> silver;
    for (const auto& m : matches) {
      const auto it = gold_by_id.find(m.standard_id);
      if (it != gold_by_id.end()) silver.emplace_back(m.localized_id, it->second);
    }
    save_label_csv(silver, paths.silver_labels());
    log_info("match-dialects: " + std::to_string(silver.size()) + " silver labels");
  }
}

void run_map(const Corpus& corpus, const std::vector<std::pair<std::string, Sentiment>>& labels,
             const Grouping& grouping, const std::string& out_prefix) {
  std::vector<SentimentPoint> points;
  std::map<std::string, const Proverb*> by_id;
  for (const auto& p : corpus.proverbs) by_id[p.id] = &p;
  size_t unknown_ids = 0;
  for (const auto& [id, label] : labels) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      ++unknown_ids;
      continue;
    }
    SentimentPoint point;
    point.proverb_id = id;
    point.sentiment = label;
    point.place = it->second->place;
    point.lat = it->second->lat;
    point.lon = it->second->lon;
    points.push_back(std::move(point));
  }
  if (unknown_ids > 0)
    log_info("map: " + std::to_string(unknown_ids) + " labels reference unknown proverb ids");
  const AggregateResult result = aggregate_regions(points, grouping);
  emit_geojson(result.regions, MapLayer::Positive, out_prefix + "_positive.geojson");
  emit_geojson(result.regions, MapLayer::Negative, out_prefix + "_negative.geojson");
  save_region_csv(result.regions, out_prefix + "_regions.csv");
  ordered_json skip;
  skip["input_labels"] = labels.size();
  skip["mapped"] = points.size() - result.skipped;
  skip["skipped_no_group_key"] = result.skipped;
  skip["unknown_proverb_ids"] = unknown_ids;
  write_text_atomic(out_prefix + "_skipped.json", skip.dump(2) + "\n");
  log_info("map: " + std::to_string(result.regions.size()) + " regions, " +
           std::to_string(result.skipped) + " skipped");
}

void stage_map(PipelineConfig& config) {
  StagePaths paths{&config};
  const std::string source = config.option<std::string>("map", "labels", "silver");
  std::string labels_path;
  std::string corpus_path;
  if (source == "silver") {
    labels_path = paths.silver_labels();
    corpus_path = paths.localized();
  } else if (source == "predictions") {
    labels_path = paths.predicted_labels();
    corpus_path = config.option<std::string>("predict", "target", "standard") == "localized"
                      ? paths.localized()
                      : paths.standard();
  } else if (source == "gold") {
    labels_path = paths.gold_labels();
    corpus_path = paths.standard();
  } else {
    labels_path = source;  // explicit file
    corpus_path = paths.localized();
  }
  if (!fs::exists(labels_path)) throw ConfigError("map: labels file missing: " + labels_path);
  Grouping grouping;
  if (config.option<std::string>("map", "grouping", "place") == "grid")
    grouping.mode = Grouping::Mode::ByGrid;
  grouping.cell_degrees = config.option<double>("map", "cell_degrees", 0.1);
  run_map(load_corpus_auto(corpus_path), load_label_csv(labels_path), grouping,
          paths.map_prefix());
}

void write_manifest(PipelineConfig& config, const std::string& backend_name,
                    const std::string& cache_dir) {
  ordered_json manifest;
  manifest["tool"] = "paremia";
  manifest["version"] = kVersion;
  manifest["created_at"] = [] {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
  }();
  manifest["seed"] = config.seed;
  manifest["backend"] = backend_name;
  manifest["cache_dir"] = cache_dir;
  manifest["config"] = config.raw;
  ordered_json hashes;
  if (config.raw.contains("inputs")) {
    for (const auto& [key, node] : config.raw.at("inputs").items()) {
      (void)node;
      const std::string path = config.input_path(key);
      if (!path.empty() && fs::exists(path)) hashes[key] = file_sha256(path);
    }
  }
  manifest["input_sha256"] = std::move(hashes);
  write_text_atomic(config.out("manifest.json").string(), manifest.dump(2) + "\n");
}

int run_pipeline(PipelineConfig& config, const std::string& backend_name,
                 const std::string& cache_dir) {
  static const std::vector<std::string> kStageOrder = {
      "ingest",        "iaa",      "ordinalize",     "select-shots",
      "predict",       "evaluate", "match-dialects", "map"};
  if (config.stages.empty()) config.stages = kStageOrder;
  for (const auto& stage : config.stages) {
    if (std::find(kStageOrder.begin(), kStageOrder.end(), stage) == kStageOrder.end())
      throw ConfigError("unknown stage: '" + stage + "'");
  }
  fs::create_directories(config.out_dir);
  write_manifest(config, backend_name, cache_dir);
  for (const auto& stage : kStageOrder) {
    if (std::find(config.stages.begin(), config.stages.end(), stage) == config.stages.end())
      continue;
    log_info("stage: " + stage);
    if (stage == "ingest") stage_ingest(config);
    else if (stage == "iaa") stage_iaa(config);
    else if (stage == "ordinalize") stage_ordinalize(config);
    else if (stage == "select-shots") stage_select_shots(config);
    else if (stage == "predict") stage_predict(config, backend_name, cache_dir);
    else if (stage == "evaluate") stage_evaluate(config);
    else if (stage == "match-dialects") stage_match_dialects(config);
    else if (stage == "map") stage_map(config);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proverb sentiment analytics toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string cache_dir;
  std::string backend_name = "mock";
  app.add_option("--config", config_path, "pipeline config file (JSON)");
  app.add_option("--seed", seed, "seed for randomized selection")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--cache-dir", cache_dir, "model response cache directory");
  app.add_option("--backend", backend_name, "model backend")
      ->check(CLI::IsMember({"http", "mock"}));
  app.add_option("--verbosity", g_verbosity, "0 = quiet, 1 = info, 2 = debug");

  // run ----------------------------------------------------------------
  auto* cmd_run = app.add_subcommand("run", "run the staged pipeline from the config file");

  // ingest -------------------------------------------------------------
  auto* cmd_ingest = app.add_subcommand("ingest", "validate and normalize corpus files");
  std::string arg_standard, arg_localized, arg_sent_ann, arg_emo_ann, arg_out = "out";
  cmd_ingest->add_option("--standard", arg_standard, "standard proverbs file");
  cmd_ingest->add_option("--localized", arg_localized, "localized proverbs file");
  cmd_ingest->add_option("--sentiment-annotations", arg_sent_ann, "sentiment annotation file");
  cmd_ingest->add_option("--emotion-annotations", arg_emo_ann, "emotion annotation file");
  cmd_ingest->add_option("--out", arg_out, "output directory");

  // iaa ----------------------------------------------------------------
  auto* cmd_iaa = app.add_subcommand("iaa", "inter-annotator agreement report");
  std::string iaa_proverbs, iaa_annotations, iaa_emotions, iaa_out = "agreement.json";
  std::string iaa_task = "sentiment";
  double iaa_min_corr = 0.15;
  cmd_iaa->add_option("--proverbs", iaa_proverbs, "proverb corpus")->required();
  cmd_iaa->add_option("--annotations", iaa_annotations, "sentiment annotations")->required();
  cmd_iaa->add_option("--emotion-annotations", iaa_emotions,
                      "emotion annotations (enables self-agreement)");
  cmd_iaa->add_option("--task", iaa_task, "sentiment | emosent")
      ->check(CLI::IsMember({"sentiment", "emosent"}));
  cmd_iaa->add_option("--min-mean-corr", iaa_min_corr, "outlier flagging threshold");
  cmd_iaa->add_option("--out", iaa_out, "report path");

  // ordinalize ----------------------------------------------------------
  auto* cmd_ordinal = app.add_subcommand("ordinalize", "votes to soft scores and ordinal labels");
  std::string ord_proverbs, ord_annotations, ord_agreement, ord_out = "ordinal.csv", ord_gold;
  std::vector<std::string> ord_exclude;
  bool ord_exclude_flagged = false;
  cmd_ordinal->add_option("--proverbs", ord_proverbs, "proverb corpus")->required();
  cmd_ordinal->add_option("--annotations", ord_annotations, "sentiment annotations")->required();
  cmd_ordinal->add_option("--exclude", ord_exclude, "annotator ids to drop");
  cmd_ordinal->add_flag("--exclude-flagged", ord_exclude_flagged,
                        "drop annotators flagged in the agreement report");
  cmd_ordinal->add_option("--agreement", ord_agreement, "agreement report (for --exclude-flagged)");
  cmd_ordinal->add_option("--out", ord_out, "ordinal CSV path");
  cmd_ordinal->add_option("--gold-labels", ord_gold, "also write majority labels CSV");

  // select-shots ---------------------------------------------------------
  auto* cmd_shots = app.add_subcommand("select-shots", "pick few-shot exemplars");
  std::string shots_proverbs, shots_annotations, shots_strategy = "rp", shots_out = "shots.json";
  int shots_k = 1, shots_dyn_pool = 10;
  cmd_shots->add_option("--proverbs", shots_proverbs, "proverb corpus")->required();
  cmd_shots->add_option("--annotations", shots_annotations, "sentiment annotations")->required();
  cmd_shots->add_option("--strategy", shots_strategy, "rp | lvs | dyn")
      ->check(CLI::IsMember({"rp", "lvs", "dyn"}));
  cmd_shots->add_option("--k", shots_k, "shots per class")->check(CLI::Range(1, 3));
  cmd_shots->add_option("--dyn-pool", shots_dyn_pool, "LVS pool size kept for dyn");
  cmd_shots->add_option("--out", shots_out, "shots file");

  // predict ---------------------------------------------------------------
  auto* cmd_predict = app.add_subcommand("predict", "run a prompting technique over a corpus");
  std::string pr_proverbs, pr_technique = "z0", pr_shots, pr_out = "predictions.jsonl";
  std::string pr_labels_out, pr_model = "default", pr_templates, pr_strategy = "rp";
  int pr_batch = 10, pr_k = 1, pr_parallelism = 4, pr_max_retries = 3;
  double pr_temperature = 0.7, pr_top_p = 0.9;
  cmd_predict->add_option("--proverbs", pr_proverbs, "proverb corpus")->required();
  cmd_predict->add_option("--technique", pr_technique, "z0 | zb | zp | fewshot")
      ->check(CLI::IsMember({"z0", "zb", "zp", "fewshot"}));
  cmd_predict->add_option("--batch-size", pr_batch, "zb batch size")
      ->check(CLI::IsMember({10, 20, 30}));
  cmd_predict->add_option("--k", pr_k, "few-shot k")->check(CLI::Range(1, 3));
  cmd_predict->add_option("--strategy", pr_strategy, "few-shot strategy")
      ->check(CLI::IsMember({"rp", "lvs", "dyn"}));
  cmd_predict->add_option("--shots", pr_shots, "shots file (for fewshot)");
  cmd_predict->add_option("--model", pr_model, "model name");
  cmd_predict->add_option("--temperature", pr_temperature, "sampling temperature");
  cmd_predict->add_option("--top-p", pr_top_p, "nucleus sampling");
  cmd_predict->add_option("--parallelism", pr_parallelism, "max in-flight requests");
  cmd_predict->add_option("--max-retries", pr_max_retries, "retries per request");
  cmd_predict->add_option("--templates", pr_templates, "prompt template override directory");
  cmd_predict->add_option("--out", pr_out, "predictions JSONL");
  cmd_predict->add_option("--labels-out", pr_labels_out, "also write predicted labels CSV");

  // evaluate ---------------------------------------------------------------
  auto* cmd_eval = app.add_subcommand("evaluate", "score predictions against gold labels");
  std::string ev_predictions, ev_gold, ev_ordinal, ev_out = "eval.json", ev_table, ev_fallback;
  bool ev_rho_onehot = false;
  cmd_eval->add_option("--predictions", ev_predictions, "predictions JSONL")->required();
  cmd_eval->add_option("--gold", ev_gold, "gold labels CSV (label techniques)");
  cmd_eval->add_option("--ordinal", ev_ordinal, "ordinal CSV (distribution techniques)");
  cmd_eval->add_option("--fallback-label", ev_fallback,
                       "score failed predictions as this label instead of excluding them");
  cmd_eval->add_flag("--rho-onehot", ev_rho_onehot, "correlate against one-hot gold columns");
  cmd_eval->add_option("--out", ev_out, "report JSON");
  cmd_eval->add_option("--table", ev_table, "also write an aligned text table");

  // match-dialects -----------------------------------------------------------
  auto* cmd_match = app.add_subcommand("match-dialects",
                                       "link standard proverbs to localized variants");
  std::string mt_standard, mt_localized, mt_out = "matches.csv", mt_diff, mt_gold, mt_silver;
  double mt_threshold = 0.35;
  bool mt_absolute = false;
  cmd_match->add_option("--standard", mt_standard, "standard corpus")->required();
  cmd_match->add_option("--localized", mt_localized, "localized corpus")->required();
  cmd_match->add_option("--max-norm-dist", mt_threshold, "match threshold");
  cmd_match->add_flag("--absolute", mt_absolute, "threshold on absolute distance");
  cmd_match->add_option("--out", mt_out, "match CSV");
  cmd_match->add_option("--diff-html", mt_diff, "also write a highlighted diff report");
  cmd_match->add_option("--gold-labels", mt_gold, "standard gold labels CSV");
  cmd_match->add_option("--silver-out", mt_silver, "silver labels CSV (needs --gold-labels)");

  // map ------------------------------------------------------------------------
  auto* cmd_map = app.add_subcommand("map", "aggregate sentiment to regions and emit GeoJSON");
  std::string mp_proverbs, mp_labels, mp_prefix = "map", mp_grouping = "place";
  double mp_cell = 0.1;
  cmd_map->add_option("--proverbs", mp_proverbs, "corpus with places/coordinates")->required();
  cmd_map->add_option("--labels", mp_labels, "labels CSV (proverb_id,label)")->required();
  cmd_map->add_option("--grouping", mp_grouping, "place | grid")
      ->check(CLI::IsMember({"place", "grid"}));
  cmd_map->add_option("--cell", mp_cell, "grid cell size in degrees");
  cmd_map->add_option("--out-prefix", mp_prefix, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      if (config_path.empty()) throw ConfigError("run needs --config");
      PipelineConfig config = load_config(config_path);
      if (seed_set) config.seed = seed;
      const std::string backend = app.count("--backend") ? backend_name
                                  : config.raw.contains("backend")
                                      ? config.raw.at("backend").get<std::string>()
                                      : backend_name;
      std::string cache = cache_dir;
      if (cache.empty()) cache = config.raw.value("cache_dir", "");
      return run_pipeline(config, backend, cache);
    }

    if (cmd_ingest->parsed()) {
      PipelineConfig config;
      config.out_dir = arg_out;
      ordered_json inputs;
      if (!arg_standard.empty()) inputs["standard"] = arg_standard;
      if (!arg_localized.empty()) inputs["localized"] = arg_localized;
      if (!arg_sent_ann.empty()) inputs["sentiment_annotations"] = arg_sent_ann;
      if (!arg_emo_ann.empty()) inputs["emotion_annotations"] = arg_emo_ann;
      config.raw["inputs"] = std::move(inputs);
      fs::create_directories(config.out_dir);
      stage_ingest(config);
      return 0;
    }

    if (cmd_iaa->parsed()) {
      Corpus corpus = load_corpus_auto(iaa_proverbs);
      load_annotations(iaa_annotations, sniff_format(iaa_annotations), corpus);
      AnnotationMatrix matrix = iaa_task == "emosent" ? AnnotationMatrix::emosent(corpus)
                                                      : AnnotationMatrix::sentiment(corpus);
      AgreementReport report = agreement_report(matrix, iaa_min_corr);
      if (!iaa_emotions.empty()) {
        const auto emotion_records =
            load_annotation_records(iaa_emotions, sniff_format(iaa_emotions));
        report.self_agreement = self_agreement(corpus.annotations, emotion_records);
      }
      write_text_atomic(iaa_out, agreement_report_to_json(report));
      return 0;
    }

    if (cmd_ordinal->parsed()) {
      Corpus corpus = load_corpus_auto(ord_proverbs);
      load_annotations(ord_annotations, sniff_format(ord_annotations), corpus);
      std::vector<std::string> exclude = ord_exclude;
      if (ord_exclude_flagged) {
        if (ord_agreement.empty())
          throw ConfigError("--exclude-flagged needs --agreement <report.json>");
        for (auto& id : flagged_from_agreement(ord_agreement)) exclude.push_back(std::move(id));
      }
      const auto rows = ordinalize_corpus(corpus, exclude);
      save_ordinal_csv(rows, ord_out);
      if (!ord_gold.empty()) {
        std::vector<std::pair<std::string, Sentiment>> gold;
        for (const auto& row : rows) gold.emplace_back(row.proverb_id, row.majority);
        save_label_csv(gold, ord_gold);
      }
      return 0;
    }

    if (cmd_shots->parsed()) {
      Corpus corpus = load_corpus_auto(shots_proverbs);
      load_annotations(shots_annotations, sniff_format(shots_annotations), corpus);
      const auto pool = build_shot_pool(corpus);
      ordered_json out;
      out["strategy"] = shots_strategy;
      out["k"] = shots_k;
      if (shots_strategy == "rp") out["classes"] = shot_set_to_json(random_pick(pool, shots_k, seed));
      else if (shots_strategy == "lvs")
        out["classes"] = shot_set_to_json(low_variance_selection(pool, shots_k));
      else out["classes"] = shot_set_to_json(low_variance_selection(pool, shots_dyn_pool));
      write_text_atomic(shots_out, out.dump(2) + "\n");
      return 0;
    }

    if (cmd_predict->parsed()) {
      PipelineConfig config;
      config.raw["predict"] = ordered_json{{"technique", pr_technique}};
      if (pr_technique == "zb") config.raw["predict"]["batch_size"] = pr_batch;
      if (!pr_templates.empty()) config.raw["predict"]["templates_dir"] = pr_templates;
      config.raw["shots"] = ordered_json{{"k", pr_k}, {"strategy", pr_strategy}};
      config.raw["model"] = ordered_json{{"name", pr_model},
                                         {"temperature", pr_temperature},
                                         {"top_p", pr_top_p},
                                         {"parallelism", pr_parallelism},
                                         {"max_retries", pr_max_retries}};
      const Corpus corpus = load_corpus_auto(pr_proverbs);
      const PromptSpec spec = prompt_spec_of(config);
      auto backend = backend_of(config, backend_name);
      std::optional<ResponseCache> cache;
      if (!cache_dir.empty()) {
        fs::create_directories(cache_dir);
        cache.emplace((fs::path(cache_dir) / "responses.jsonl").string());
      }
      std::shared_ptr<Embedder> embedder;
      ShotsProvider provider;
      if (spec.kind == TechniqueKind::FewShot) {
        if (pr_shots.empty()) throw ConfigError("--technique fewshot needs --shots <file>");
        provider = shots_provider_of(config, spec, pr_shots, embedder);
      }
      PromptTemplates templates = PromptTemplates::builtin();
      if (!pr_templates.empty()) templates = PromptTemplates::from_directory(pr_templates);
      ModelClient client(*backend, inference_config_of(config), cache ? &*cache : nullptr);
      const CorpusPredictions predictions =
          client.predict_corpus(corpus.proverbs, spec, provider, templates);
      save_predictions_jsonl(predictions, spec.technique_tag(), pr_out);
      if (!pr_labels_out.empty()) {
        std::vector<std::pair<std::string, Sentiment>> labels;
        for (const auto& item : predictions.items)
          if (item.prediction && item.prediction->kind == ModelPrediction::Kind::Label)
            labels.emplace_back(item.proverb_id, *item.prediction->label);
        save_label_csv(labels, pr_labels_out);
      }
      return 0;
    }

    if (cmd_eval->parsed()) {
      const auto predictions = load_predictions_jsonl(ev_predictions);
      const bool distribution_mode =
          std::any_of(predictions.begin(), predictions.end(),
                      [](const LoadedPrediction& p) { return p.distribution.has_value(); });
      std::optional<Sentiment> fallback;
      if (!ev_fallback.empty()) {
        fallback = sentiment_from_string(ev_fallback);
        if (!fallback) throw ConfigError("unknown fallback label '" + ev_fallback + "'");
      }
      if (distribution_mode) {
        if (ev_ordinal.empty())
          throw ConfigError("distribution predictions need --ordinal <ordinal.csv>");
        run_distribution_evaluation(load_ordinal_csv(ev_ordinal), predictions, ev_rho_onehot,
                                    ev_out, ev_table);
      } else {
        if (ev_gold.empty()) throw ConfigError("label predictions need --gold <labels.csv>");
        run_label_evaluation(load_label_csv(ev_gold), predictions, fallback, ev_out, ev_table);
      }
      return 0;
    }

    if (cmd_match->parsed()) {
      const Corpus standards = load_corpus_auto(mt_standard);
      const Corpus localized = load_corpus_auto(mt_localized);
      MatchOptions options;
      options.max_norm_dist = mt_threshold;
      options.absolute_threshold = mt_absolute;
      const auto matches = match_corpora(standards, localized, options);
      save_match_csv(matches, mt_out);
      std::cout << matches.size() << " of " << localized.proverbs.size()
                << " localized proverbs matched\n";
      if (!mt_diff.empty()) write_match_diff_html(standards, localized, matches, mt_diff);
      if (!mt_silver.empty()) {
        if (mt_gold.empty()) throw ConfigError("--silver-out needs --gold-labels");
        const auto gold = load_label_csv(mt_gold);
        const std::map<std::string, Sentiment> gold_by_id(gold.begin(), gold.end());
        std::vector<std::pair<std::string, Sentiment>> silver;
        for (const auto& m : matches) {
          const auto it = gold_by_id.find(m.standard_id);
          if (it != gold_by_id.end()) silver.emplace_back(m.localized_id, it->second);
        }
        save_label_csv(silver, mt_silver);
      }
      return 0;
    }

    if (cmd_map->parsed()) {
      Grouping grouping;
      if (mp_grouping == "grid") grouping.mode = Grouping::Mode::ByGrid;
      grouping.cell_degrees = mp_cell;
      run_map(load_corpus_auto(mp_proverbs), load_label_csv(mp_labels), grouping, mp_prefix);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
