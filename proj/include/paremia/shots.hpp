#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "paremia/corpus.hpp"
#include "paremia/sentiment.hpp"

namespace paremia {

// A shot candidate: a proverb with its aggregated gold label and the
// population variance of its -1/0/+1 ratings.
struct ShotCandidate {
  std::string id;
  std::string text;
  Sentiment label = Sentiment::Ambiguous;
  double rating_variance = 0.0;
};

struct ShotSet {
  // k entries per class, indexed by kSentimentOrder.
  std::array<std::vector<ShotCandidate>, 3> per_class;

  std::vector<ShotCandidate>& of(Sentiment s) { return per_class[static_cast<size_t>(s)]; }
  const std::vector<ShotCandidate>& of(Sentiment s) const {
    return per_class[static_cast<size_t>(s)];
  }
  size_t total() const;
  bool contains(std::string_view id) const;
};

// Candidate pool built from a corpus: per-proverb majority label
// (tie -> Ambiguous) and rating variance over sentiment votes. Proverbs
// with < 2 sentiment votes are dropped.
std::vector<ShotCandidate> build_shot_pool(const Corpus& corpus);

// Population variance of -1/0/+1 ratings.
double rating_variance(std::span<const int> ratings);

// RP: k uniform draws per class without replacement, mt19937_64 seeded with
// `seed`; classes drawn in canonical order with a portable bounded draw, so
// the result is reproducible across platforms.
// exclude_id guards against selecting the query proverb itself.
ShotSet random_pick(std::span<const ShotCandidate> pool, int k, uint64_t seed,
                    std::string_view exclude_id = {});

// LVS: per class, the k candidates with the smallest rating variance
// (ties by id ascending). Sorting realizes the subset-sum argmin exactly
// because the objective is separable.
ShotSet low_variance_selection(std::span<const ShotCandidate> pool, int k,
                               std::string_view exclude_id = {});

struct Embedder {
  virtual ~Embedder() = default;
  virtual size_t dim() const = 0;
  virtual std::vector<float> embed(std::string_view text) const = 0;
};

// Deterministic character-trigram hashing embedder: text is normalized,
// wrapped in boundary sentinels, each code point trigram hashed (FNV-1a)
// into dim buckets, counts L2-normalized. Throws DataError when the text is
// empty after normalization.
class TrigramEmbedder : public Embedder {
 public:
  explicit TrigramEmbedder(size_t dim = 256);
  size_t dim() const override { return dim_; }
  std::vector<float> embed(std::string_view text) const override;

 private:
  size_t dim_;
};

// Remote embedder: POST {"text": ...} -> {"vector": [...]}.
std::unique_ptr<Embedder> make_http_embedder(const std::string& url, size_t expected_dim = 0);

// Named construction for config keys "fallback-trigram" and "http".
std::unique_ptr<Embedder> make_embedder(const std::string& backend, size_t dim,
                                        const std::string& url = {});

// DYN: re-rank an LVS candidate list by cosine similarity to the query
// (descending), ties by variance ascending then id, then take the top k.
// Zero-norm embeddings are skipped with a warning callback. When `pooled`
// is set the union of the class lists is ranked once and the top 3k shots
// keep their own gold labels.
ShotSet dynamic_selection(const Proverb& query, const ShotSet& lvs_pool, const Embedder& embedder,
                          int k, bool pooled = false,
                          const std::function<void(const std::string&)>& warn = {});

}  // namespace paremia
