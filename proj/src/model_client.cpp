#include "paremia/model_client.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <fstream>
#include <regex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "paremia/errors.hpp"

namespace paremia {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class HttpBackend : public Backend {
 public:
  HttpBackend(std::string url, std::string api_key)
      : url_(std::move(url)), api_key_(std::move(api_key)) {}

  std::string name() const override { return "http"; }

  CompletionResult complete(const std::string& prompt, const InferenceConfig& config) override {
    const ParsedUrl parsed = parse_url(url_);
    httplib::Client client(parsed.base);
    const auto timeout = std::chrono::milliseconds(static_cast<long>(config.timeout_s * 1000));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);

    json body;
    body["model"] = config.model_name;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = config.temperature;
    body["top_p"] = config.top_p;
    body["max_tokens"] = config.max_tokens;

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const auto res = client.Post(parsed.path, headers, body.dump(), "application/json");
    if (!res)
      return {false, {}, true, "transport failure: " + httplib::to_string(res.error())};
    if (res->status >= 500)
      return {false, {}, true, "HTTP " + std::to_string(res->status) + ": " + res->body};
    if (res->status != 200)
      return {false, {}, false, "HTTP " + std::to_string(res->status) + ": " + res->body};
    try {
      const auto parsed_body = json::parse(res->body);
      return {true, parsed_body.at("choices").at(0).at("message").at("content").get<std::string>(),
              false, {}};
    } catch (const json::exception& e) {
      return {false, {}, false, std::string("malformed response body: ") + e.what()};
    }
  }

 private:
  std::string url_;
  std::string api_key_;
};

class RuleMockBackend : public Backend {
 public:
  explicit RuleMockBackend(std::vector<MockRule> rules) : rules_(std::move(rules)) {
    if (rules_.empty()) throw ConfigError("rule mock backend needs at least one rule");
  }

  std::string name() const override { return "mock"; }

  CompletionResult complete(const std::string& prompt, const InferenceConfig&) override {
    if (prompt.empty()) return {false, {}, false, "empty prompt"};
    const auto batch = batch_payloads(prompt);
    if (!batch.empty()) {
      std::string out;
      for (size_t i = 0; i < batch.size(); ++i) {
        if (i > 0) out += ", ";
        out += to_string(classify(batch[i]));
      }
      return {true, out, false, {}};
    }
    const std::string query = last_proverb_line(prompt);
    const Sentiment label = classify(query);
    if (prompt.find("Estimate the percentage") != std::string::npos) {
      const auto pct = [&](Sentiment s) { return s == label ? "100%" : "0%"; };
      return {true,
              "Positive: " + std::string(pct(Sentiment::Positive)) +
                  " Negative: " + std::string(pct(Sentiment::Negative)) +
                  " Ambiguous: " + std::string(pct(Sentiment::Ambiguous)),
              false,
              {}};
    }
    return {true, std::string(to_string(label)), false, {}};
  }

 private:
  Sentiment classify(const std::string& text) const {
    for (const auto& rule : rules_)
      if (text.find(rule.keyword) != std::string::npos) return rule.label;
    return Sentiment::Ambiguous;
  }

  static std::vector<std::string> batch_payloads(const std::string& prompt) {
    std::vector<std::string> out;
    if (prompt.find("You are given ") != 0) return out;
    static const std::regex numbered(R"(^\d+\. (.*)$)");
    std::istringstream in(prompt);
    std::string line;
    std::smatch m;
    while (std::getline(in, line)) {
      if (std::regex_match(line, m, numbered)) out.push_back(m[1].str());
    }
    return out;
  }

  static std::string last_proverb_line(const std::string& prompt) {
    constexpr std::string_view kPrefix = "Proverb: ";
    std::string last;
    std::istringstream in(prompt);
    std::string line;
    while (std::getline(in, line)) {
      if (line.starts_with(kPrefix)) last = line.substr(kPrefix.size());
    }
    return last;
  }

  std::vector<MockRule> rules_;
};

}  // namespace

std::unique_ptr<Backend> make_http_backend(const std::string& url, const std::string& api_key) {
  if (url.empty()) throw ConfigError("http backend: URL is empty");
  return std::make_unique<HttpBackend>(url, api_key);
}

std::unique_ptr<Backend> make_http_backend_from_env() {
  const char* url = std::getenv("MODEL_API_URL");
  if (url == nullptr || *url == '\0')
    throw ConfigError("http backend: MODEL_API_URL is not set");
  const char* key = std::getenv("MODEL_API_KEY");
  return make_http_backend(url, key ? key : "");
}

std::unique_ptr<Backend> make_rule_mock_backend(std::vector<MockRule> rules) {
  return std::make_unique<RuleMockBackend>(std::move(rules));
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // fresh cache file, created on first put
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto obj = json::parse(line);
      entries_[obj.at("key").get<std::string>()] = obj.at("response").get<std::string>();
    } catch (const json::exception& e) {
      throw DataError(path_ + ":" + std::to_string(line_no) + ": corrupt cache entry: " + e.what());
    }
  }
}

std::string ResponseCache::sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string ResponseCache::key_of(const std::string& model, const std::string& technique_tag,
                                  const std::string& prompt) {
  return sha256_hex(model + '\x1f' + technique_tag + '\x1f' + prompt);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::put(const std::string& key, const std::string& model,
                        const std::string& technique_tag, const std::string& prompt,
                        const std::string& response) {
  std::lock_guard lock(mutex_);
  if (!entries_.emplace(key, response).second) return;  // immutable once written
  if (path_.empty()) return;
  json o;
  o["key"] = key;
  o["model"] = model;
  o["technique"] = technique_tag;
  o["prompt_sha256"] = sha256_hex(prompt);
  o["response"] = response;
  o["created_at"] = utc_timestamp();
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw DataError("cannot append to cache file: " + path_);
  out << o.dump() << "\n";
}

size_t ResponseCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

ModelClient::ModelClient(Backend& backend, InferenceConfig config, ResponseCache* cache)
    : backend_(backend), config_(std::move(config)), cache_(cache) {}

std::string ModelClient::predict_one(const std::string& prompt, const std::string& technique_tag) {
  if (prompt.empty()) throw ConfigError("predict_one: empty prompt");
  const std::string key = ResponseCache::key_of(config_.model_name, technique_tag, prompt);
  if (cache_) {
    if (const auto hit = cache_->get(key)) {
      ++cache_hits_;
      return *hit;
    }
  }
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(config_.backoff_base_ms << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }
    ++backend_calls_;
    const CompletionResult result = backend_.complete(prompt, config_);
    if (result.ok) {
      if (cache_) cache_->put(key, config_.model_name, technique_tag, prompt, result.text);
      return result.text;
    }
    if (!result.retryable) throw BackendError(backend_.name() + ": " + result.error);
    last_error = result.error;
  }
  throw BackendError(backend_.name() + ": exhausted " + std::to_string(config_.max_retries) +
                     " retries; last error: " + last_error);
}

CorpusPredictions ModelClient::predict_corpus(std::span<const Proverb> proverbs,
                                              const PromptSpec& spec,
                                              const ShotsProvider& shots_provider,
                                              const PromptTemplates& templates) {
  spec.validate();
  if (spec.kind == TechniqueKind::FewShot && !shots_provider)
    throw ConfigError("few-shot prediction needs a shots provider");

  struct Unit {
    size_t first = 0;
    size_t count = 0;
  };
  std::vector<Unit> units;
  if (spec.kind == TechniqueKind::Zb) {
    for (size_t i = 0; i < proverbs.size(); i += spec.batch_size)
      units.push_back({i, std::min<size_t>(spec.batch_size, proverbs.size() - i)});
  } else {
    for (size_t i = 0; i < proverbs.size(); ++i) units.push_back({i, 1});
  }

  CorpusPredictions result;
  result.items.resize(proverbs.size());
  for (size_t i = 0; i < proverbs.size(); ++i) result.items[i].proverb_id = proverbs[i].id;

  const std::string tag = spec.technique_tag();
  std::atomic<size_t> next_unit{0};

  const auto run_unit = [&](const Unit& unit) {
    const auto record_failure = [&](const std::string& message) {
      for (size_t i = unit.first; i < unit.first + unit.count; ++i)
        result.items[i].error = message;
    };
    try {
      std::vector<std::string> texts;
      texts.reserve(unit.count);
      for (size_t i = unit.first; i < unit.first + unit.count; ++i)
        texts.push_back(proverbs[i].text);

      std::string prompt;
      if (spec.kind == TechniqueKind::FewShot) {
        const ShotSet shots = shots_provider(proverbs[unit.first]);
        prompt = build_prompt(spec, texts, &shots, templates);
      } else {
        prompt = build_prompt(spec, texts, nullptr, templates);
      }
      const std::string response = predict_one(prompt, tag);

      switch (spec.kind) {
        case TechniqueKind::Zb: {
          const auto labels = parse_batch_labels(response, unit.count);
          for (size_t i = 0; i < unit.count; ++i) {
            ModelPrediction p;
            p.kind = ModelPrediction::Kind::Label;
            p.label = labels[i];
            p.raw = response;
            result.items[unit.first + i].prediction = std::move(p);
          }
          break;
        }
        case TechniqueKind::Zp: {
          ModelPrediction p;
          p.kind = ModelPrediction::Kind::Distribution;
          p.distribution = parse_percentages(response);
          p.raw = response;
          result.items[unit.first].prediction = std::move(p);
          break;
        }
        default: {
          ModelPrediction p;
          p.kind = ModelPrediction::Kind::Label;
          p.label = parse_label(response, ParseMode::Tolerant);
          p.raw = response;
          result.items[unit.first].prediction = std::move(p);
          break;
        }
      }
    } catch (const Error& e) {
      record_failure(e.what());
    }
  };

  const size_t workers =
      std::min<size_t>(std::max(1, config_.parallelism), std::max<size_t>(1, units.size()));
  if (workers <= 1) {
    for (const auto& unit : units) run_unit(unit);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const size_t u = next_unit.fetch_add(1);
          if (u >= units.size()) return;
          run_unit(units[u]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  result.backend_calls = backend_calls_.load();
  result.cache_hits = cache_hits_.load();
  for (const auto& item : result.items)
    if (item.error) ++result.failures;
  return result;
}

}  // namespace paremia
