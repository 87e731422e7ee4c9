#include "paremia/shots.hpp"

#include <algorithm>
#include <map>
#include <random>

#include <httplib.h>
#include <json.hpp>

#include "http_util.hpp"
#include "paremia/errors.hpp"
#include "paremia/kernels/kernels.hpp"
#include "paremia/text.hpp"

namespace paremia {

namespace {

// Portable bounded draw (rejection sampling); std::uniform_int_distribution
// is implementation-defined, which would break cross-platform run manifests.
uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::vector<const ShotCandidate*> class_members(std::span<const ShotCandidate> pool, Sentiment s,
                                                std::string_view exclude_id) {
  std::vector<const ShotCandidate*> out;
  for (const auto& c : pool)
    if (c.label == s && c.id != exclude_id) out.push_back(&c);
  return out;
}

[[noreturn]] void too_few(Sentiment s, size_t have, int k) {
  throw DataError("shot selection: class " + std::string(to_string(s)) + " has " +
                  std::to_string(have) + " candidates, need k=" + std::to_string(k));
}

struct Ranked {
  const ShotCandidate* candidate;
  double cosine;
};

void rank_by_cosine(std::vector<Ranked>& items) {
  std::stable_sort(items.begin(), items.end(), [](const Ranked& a, const Ranked& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    if (a.candidate->rating_variance != b.candidate->rating_variance)
      return a.candidate->rating_variance < b.candidate->rating_variance;
    return a.candidate->id < b.candidate->id;
  });
}

class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(std::string url, size_t expected_dim) : url_(std::move(url)), dim_(expected_dim) {}

  size_t dim() const override { return dim_; }

  std::vector<float> embed(std::string_view text) const override {
    const ParsedUrl parsed = parse_url(url_);
    httplib::Client client(parsed.base);
    client.set_connection_timeout(30);
    client.set_read_timeout(30);
    nlohmann::json body;
    body["text"] = std::string(text);
    const auto res = client.Post(parsed.path, body.dump(), "application/json");
    if (!res) throw BackendError("embedder: cannot reach " + url_);
    if (res->status != 200)
      throw BackendError("embedder: HTTP " + std::to_string(res->status) + " from " + url_);
    std::vector<float> vec;
    try {
      const auto parsed_body = nlohmann::json::parse(res->body);
      vec = parsed_body.at("vector").get<std::vector<float>>();
    } catch (const nlohmann::json::exception& e) {
      throw BackendError(std::string("embedder: malformed response: ") + e.what());
    }
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_)
      throw BackendError("embedder: dimension changed from " + std::to_string(dim_) + " to " +
                         std::to_string(vec.size()));
    return vec;
  }

 private:
  std::string url_;
  mutable size_t dim_;
};

}  // namespace

size_t ShotSet::total() const {
  size_t n = 0;
  for (const auto& c : per_class) n += c.size();
  return n;
}

bool ShotSet::contains(std::string_view id) const {
  for (const auto& c : per_class)
    for (const auto& shot : c)
      if (shot.id == id) return true;
  return false;
}

double rating_variance(std::span<const int> ratings) {
  const size_t n = ratings.size();
  if (n == 0) return 0.0;
  double mean = 0.0;
  for (int r : ratings) mean += r;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (int r : ratings) acc += (r - mean) * (r - mean);
  return acc / static_cast<double>(n);
}

std::vector<ShotCandidate> build_shot_pool(const Corpus& corpus) {
  std::map<std::string_view, std::vector<int>> ratings;
  for (const auto& r : corpus.annotations)
    if (r.sentiment) ratings[r.proverb_id].push_back(sentiment_rating(*r.sentiment));

  std::vector<ShotCandidate> pool;
  for (const auto& p : corpus.proverbs) {
    const auto it = ratings.find(p.id);
    if (it == ratings.end() || it->second.size() < 2) continue;
    long n_pos = 0, n_neg = 0, n_amb = 0;
    for (int r : it->second) {
      if (r > 0) ++n_pos;
      else if (r < 0) ++n_neg;
      else ++n_amb;
    }
    ShotCandidate c;
    c.id = p.id;
    c.text = p.text;
    c.label = majority_sentiment(n_pos, n_neg, n_amb);
    c.rating_variance = rating_variance(it->second);
    pool.push_back(std::move(c));
  }
  return pool;
}

ShotSet random_pick(std::span<const ShotCandidate> pool, int k, uint64_t seed,
                    std::string_view exclude_id) {
  if (k < 1) throw ConfigError("random_pick: k must be >= 1");
  std::mt19937_64 rng(seed);
  ShotSet out;
  for (Sentiment s : kSentimentOrder) {
    auto members = class_members(pool, s, exclude_id);
    if (members.size() < static_cast<size_t>(k)) too_few(s, members.size(), k);
    // partial Fisher-Yates: the first k slots end up uniform without replacement
    for (int i = 0; i < k; ++i) {
      const size_t j = i + bounded(rng, members.size() - i);
      std::swap(members[i], members[j]);
      out.of(s).push_back(*members[i]);
    }
  }
  return out;
}

ShotSet low_variance_selection(std::span<const ShotCandidate> pool, int k,
                               std::string_view exclude_id) {
  if (k < 1) throw ConfigError("low_variance_selection: k must be >= 1");
  ShotSet out;
  for (Sentiment s : kSentimentOrder) {
    auto members = class_members(pool, s, exclude_id);
    if (members.size() < static_cast<size_t>(k)) too_few(s, members.size(), k);
    std::sort(members.begin(), members.end(), [](const ShotCandidate* a, const ShotCandidate* b) {
      if (a->rating_variance != b->rating_variance) return a->rating_variance < b->rating_variance;
      return a->id < b->id;
    });
    for (int i = 0; i < k; ++i) out.of(s).push_back(*members[i]);
  }
  return out;
}

TrigramEmbedder::TrigramEmbedder(size_t dim) : dim_(dim) {
  if (dim < 8) throw ConfigError("TrigramEmbedder: dim must be >= 8");
}

std::vector<float> TrigramEmbedder::embed(std::string_view text) const {
  const std::string norm = normalize_text(text);
  if (norm.empty()) throw DataError("TrigramEmbedder: text empty after normalization");
  std::vector<uint32_t> cps = to_codepoints(norm);
  cps.insert(cps.begin(), 0x02);  // boundary sentinels make 1- and 2-char
  cps.push_back(0x03);            // texts produce at least one trigram

  std::vector<float> vec(dim_, 0.0f);
  for (size_t i = 0; i + 3 <= cps.size(); ++i) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a over the 12 trigram bytes
    for (size_t j = i; j < i + 3; ++j) {
      uint32_t cp = cps[j];
      for (int b = 0; b < 4; ++b) {
        h ^= (cp >> (8 * b)) & 0xFFu;
        h *= 1099511628211ull;
      }
    }
    vec[h % dim_] += 1.0f;
  }
  const double norm_sq = kernels::norm_sq_f32(vec);
  const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
  for (auto& v : vec) v *= inv;
  return vec;
}

std::unique_ptr<Embedder> make_http_embedder(const std::string& url, size_t expected_dim) {
  return std::make_unique<HttpEmbedder>(url, expected_dim);
}

std::unique_ptr<Embedder> make_embedder(const std::string& backend, size_t dim,
                                        const std::string& url) {
  if (backend == "fallback-trigram") return std::make_unique<TrigramEmbedder>(dim);
  if (backend == "http") {
    if (url.empty()) throw ConfigError("embedder backend 'http' needs a URL");
    return make_http_embedder(url, dim);
  }
  throw ConfigError("unknown embedder backend: '" + backend + "'");
}

ShotSet dynamic_selection(const Proverb& query, const ShotSet& lvs_pool, const Embedder& embedder,
                          int k, bool pooled,
                          const std::function<void(const std::string&)>& warn) {
  if (k < 1) throw ConfigError("dynamic_selection: k must be >= 1");
  const std::vector<float> qvec = embedder.embed(query.text);

  const auto rank_class = [&](std::span<const ShotCandidate> members) {
    std::vector<Ranked> ranked;
    for (const auto& c : members) {
      if (c.id == query.id) continue;
      const std::vector<float> cvec = embedder.embed(c.text);
      double cosine = 0.0;
      if (!kernels::cosine_f32(qvec, cvec, cosine)) {
        if (warn) warn("dynamic_selection: zero-norm embedding for '" + c.id + "', skipped");
        continue;
      }
      ranked.push_back({&c, cosine});
    }
    rank_by_cosine(ranked);
    return ranked;
  };

  ShotSet out;
  if (pooled) {
    std::vector<ShotCandidate> all;
    for (Sentiment s : kSentimentOrder)
      for (const auto& c : lvs_pool.of(s)) all.push_back(c);
    auto ranked = rank_class(all);
    if (ranked.size() < static_cast<size_t>(3 * k))
      throw DataError("dynamic_selection: pooled candidate list exhausted");
    for (int i = 0; i < 3 * k; ++i) out.of(ranked[i].candidate->label).push_back(*ranked[i].candidate);
    return out;
  }

  for (Sentiment s : kSentimentOrder) {
    auto ranked = rank_class(lvs_pool.of(s));
    if (ranked.size() < static_cast<size_t>(k)) too_few(s, ranked.size(), k);
    for (int i = 0; i < k; ++i) out.of(s).push_back(*ranked[i].candidate);
  }
  return out;
}

}  // namespace paremia
