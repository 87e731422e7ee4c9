#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"
#include "paremia/prompting.hpp"

namespace paremia {

struct InferenceConfig {
  std::string model_name = "default";
  double temperature = 0.7;
  double top_p = 0.9;
  int max_tokens = 256;
  double timeout_s = 60.0;
  int max_retries = 3;     // retries after the first attempt
  int parallelism = 4;     // max in-flight requests in predict_corpus
  int backoff_base_ms = 250;
};

struct CompletionResult {
  bool ok = false;
  std::string text;
  bool retryable = false;  // meaningful when !ok
  std::string error;
};

struct Backend {
  virtual ~Backend() = default;
  virtual CompletionResult complete(const std::string& prompt, const InferenceConfig& config) = 0;
  virtual std::string name() const = 0;
};

// Single text-in/text-out chat endpoint:
// POST {model, messages, temperature, top_p, max_tokens} -> choices[0].message.content.
// Bearer auth when an API key is provided. 5xx/transport failures are
// retryable, 4xx is not.
std::unique_ptr<Backend> make_http_backend(const std::string& url, const std::string& api_key);

// Reads MODEL_API_URL / MODEL_API_KEY.
std::unique_ptr<Backend> make_http_backend_from_env();

// Deterministic offline backend: answers with the label of the first rule
// whose keyword occurs in the proverb text, Ambiguous otherwise. Understands
// the builtin prompt layouts, including the batch and percentage output
// contracts.
struct MockRule {
  std::string keyword;
  Sentiment label = Sentiment::Ambiguous;
};
std::unique_ptr<Backend> make_rule_mock_backend(std::vector<MockRule> rules);

// Append-only JSONL response cache keyed by
// sha256(model \x1f technique \x1f prompt). An empty path keeps the cache
// in memory only. Safe for concurrent put() from one process.
class ResponseCache {
 public:
  explicit ResponseCache(std::string path = {});

  static std::string key_of(const std::string& model, const std::string& technique_tag,
                            const std::string& prompt);
  static std::string sha256_hex(std::string_view bytes);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& model, const std::string& technique_tag,
           const std::string& prompt, const std::string& response);
  size_t size() const;

 private:
  std::string path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> entries_;
};

// Per-item outcome of a corpus run; exactly one of prediction/error is set.
struct ItemOutcome {
  std::string proverb_id;
  std::optional<ModelPrediction> prediction;
  std::optional<std::string> error;
};

struct CorpusPredictions {
  std::vector<ItemOutcome> items;  // aligned with the input proverbs
  size_t backend_calls = 0;
  size_t cache_hits = 0;
  size_t failures = 0;
};

using ShotsProvider = std::function<ShotSet(const Proverb&)>;

class ModelClient {
 public:
  ModelClient(Backend& backend, InferenceConfig config, ResponseCache* cache = nullptr);

  // Raw completion with cache lookup and exponential-backoff retries.
  // Throws BackendError after max_retries transient failures or on the
  // first permanent one.
  std::string predict_one(const std::string& prompt, const std::string& technique_tag);

  // Runs the technique over the whole list with bounded parallelism.
  // Output order matches input order regardless of completion order; item
  // failures are recorded, not thrown. Zb groups inputs into batch_size
  // chunks, the final short batch goes out as its own smaller batch.
  CorpusPredictions predict_corpus(std::span<const Proverb> proverbs, const PromptSpec& spec,
                                   const ShotsProvider& shots_provider = {},
                                   const PromptTemplates& templates = PromptTemplates::builtin());

  size_t backend_calls() const { return backend_calls_; }

 private:
  Backend& backend_;
  InferenceConfig config_;
  ResponseCache* cache_;
  std::atomic<size_t> backend_calls_{0};
  std::atomic<size_t> cache_hits_{0};
};

}  // namespace paremia
