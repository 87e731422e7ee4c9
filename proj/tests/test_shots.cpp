#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "paremia/errors.hpp"
#include "paremia/kernels/kernels.hpp"
#include "paremia/shots.hpp"
#include "util.hpp"

using namespace paremia;

namespace {

ShotCandidate candidate(const std::string& id, Sentiment label, double variance,
                        std::string text = {}) {
  ShotCandidate c;
  c.id = id;
  c.text = text.empty() ? "κείμενο " + id : std::move(text);
  c.label = label;
  c.rating_variance = variance;
  return c;
}

std::vector<ShotCandidate> balanced_pool(std::mt19937_64& rng, size_t per_class) {
  std::vector<ShotCandidate> pool;
  int i = 0;
  for (Sentiment s : kSentimentOrder)
    for (size_t c = 0; c < per_class; ++c)
      pool.push_back(candidate("p" + std::to_string(++i), s,
                               static_cast<double>(rng() % 100) / 100.0,
                               testutil::random_greek_text(rng)));
  return pool;
}

}  // namespace

TEST_CASE("build_shot_pool aggregates votes") {
  Corpus corpus;
  for (const char* id : {"p1", "p2", "p3"}) {
    Proverb p;
    p.id = id;
    p.text = std::string("κείμενο ") + id;
    corpus.proverbs.push_back(std::move(p));
  }
  const auto vote = [&](const char* pid, const char* aid, Sentiment s) {
    AnnotationRecord r;
    r.proverb_id = pid;
    r.annotator_id = aid;
    r.sentiment = s;
    corpus.annotations.push_back(std::move(r));
  };
  vote("p1", "a1", Sentiment::Positive);
  vote("p1", "a2", Sentiment::Positive);
  vote("p1", "a3", Sentiment::Negative);
  vote("p2", "a1", Sentiment::Ambiguous);
  vote("p2", "a2", Sentiment::Ambiguous);
  vote("p3", "a1", Sentiment::Positive);  // single vote: dropped

  const auto pool = build_shot_pool(corpus);
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].id == "p1");
  CHECK(pool[0].label == Sentiment::Positive);
  // ratings (+1, +1, -1): mean 1/3, population variance 8/9
  CHECK(pool[0].rating_variance == doctest::Approx(8.0 / 9.0));
  CHECK(pool[1].label == Sentiment::Ambiguous);
  CHECK(pool[1].rating_variance == doctest::Approx(0.0));
}

TEST_CASE("random_pick") {
  std::mt19937_64 rng(7);
  SUBCASE("forced selection when pool is exactly k per class") {
    const auto pool = balanced_pool(rng, 2);
    const ShotSet shots = random_pick(pool, 2, 123);
    for (Sentiment s : kSentimentOrder) {
      REQUIRE(shots.of(s).size() == 2);
      std::set<std::string> got, want;
      for (const auto& c : shots.of(s)) got.insert(c.id);
      for (const auto& c : pool)
        if (c.label == s) want.insert(c.id);
      CHECK(got == want);
    }
  }
  SUBCASE("same seed gives identical shots, different seed may differ") {
    const auto pool = balanced_pool(rng, 8);
    const ShotSet a = random_pick(pool, 3, 42);
    const ShotSet b = random_pick(pool, 3, 42);
    for (Sentiment s : kSentimentOrder) {
      REQUIRE(a.of(s).size() == b.of(s).size());
      for (size_t i = 0; i < a.of(s).size(); ++i) CHECK(a.of(s)[i].id == b.of(s)[i].id);
    }
  }
  SUBCASE("class with too few members is an error naming the class") {
    std::vector<ShotCandidate> pool = {
        candidate("p1", Sentiment::Positive, 0.1), candidate("p2", Sentiment::Positive, 0.1),
        candidate("p3", Sentiment::Negative, 0.1), candidate("p4", Sentiment::Negative, 0.1),
        candidate("p5", Sentiment::Ambiguous, 0.1)};
    CHECK_THROWS_WITH_AS(random_pick(pool, 2, 1), doctest::Contains("Ambiguous"), DataError);
  }
  SUBCASE("query proverb is never selected") {
    const auto pool = balanced_pool(rng, 3);
    for (const auto& c : pool) {
      const ShotSet shots = random_pick(pool, 2, 99, c.id);
      CHECK_FALSE(shots.contains(c.id));
    }
  }
}

TEST_CASE("low_variance_selection") {
  SUBCASE("sorted by variance") {
    std::vector<ShotCandidate> pool = {
        candidate("pa", Sentiment::Positive, 0.24), candidate("pb", Sentiment::Positive, 0.0),
        candidate("pc", Sentiment::Positive, 0.5),  candidate("n1", Sentiment::Negative, 0.1),
        candidate("a1", Sentiment::Ambiguous, 0.1)};
    const ShotSet shots = low_variance_selection(pool, 1);
    CHECK(shots.of(Sentiment::Positive)[0].id == "pb");  // zero variance first

    std::vector<ShotCandidate> two_per = pool;
    two_per.push_back(candidate("n2", Sentiment::Negative, 0.2));
    two_per.push_back(candidate("a2", Sentiment::Ambiguous, 0.2));
    const ShotSet shots2 = low_variance_selection(two_per, 2);
    REQUIRE(shots2.of(Sentiment::Positive).size() == 2);
    CHECK(shots2.of(Sentiment::Positive)[0].id == "pb");
    CHECK(shots2.of(Sentiment::Positive)[1].id == "pa");  // 0.0 then 0.24
  }
  SUBCASE("variance ties break by id") {
    std::vector<ShotCandidate> pool = {
        candidate("z", Sentiment::Positive, 0.1), candidate("a", Sentiment::Positive, 0.1),
        candidate("n", Sentiment::Negative, 0.0), candidate("m", Sentiment::Ambiguous, 0.0)};
    const ShotSet shots = low_variance_selection(pool, 1);
    CHECK(shots.of(Sentiment::Positive)[0].id == "a");
  }
  SUBCASE("pool order does not matter") {
    std::mt19937_64 rng(13);
    auto pool = balanced_pool(rng, 6);
    const ShotSet base = low_variance_selection(pool, 3);
    for (int t = 0; t < 10; ++t) {
      std::shuffle(pool.begin(), pool.end(), rng);
      const ShotSet again = low_variance_selection(pool, 3);
      for (Sentiment s : kSentimentOrder)
        for (size_t i = 0; i < 3; ++i) CHECK(base.of(s)[i].id == again.of(s)[i].id);
    }
  }
  SUBCASE("objective equals exhaustive subset enumeration") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      const int k = 1 + rng() % 3;
      const size_t per_class = k + rng() % (12 - k);
      std::vector<ShotCandidate> pool;
      int i = 0;
      for (Sentiment s : kSentimentOrder)
        for (size_t c = 0; c < per_class; ++c)
          pool.push_back(candidate("p" + std::to_string(++i), s,
                                   static_cast<double>(rng() % 50) / 100.0));
      const ShotSet shots = low_variance_selection(pool, k);
      for (Sentiment s : kSentimentOrder) {
        std::vector<double> variances;
        for (const auto& c : pool)
          if (c.label == s) variances.push_back(c.rating_variance);
        double got = 0.0;
        for (const auto& c : shots.of(s)) got += c.rating_variance;
        CHECK(got == doctest::Approx(oracles::min_subset_variance_sum(variances, k)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("trigram embedder") {
  const TrigramEmbedder embedder(256);
  SUBCASE("deterministic, unit norm") {
    const auto a = embedder.embed("καλημέρα κόσμε");
    const auto b = embedder.embed("καλημέρα κόσμε");
    CHECK(a == b);
    double cosine = 0.0;
    REQUIRE(kernels::cosine_f32(a, b, cosine));
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::sqrt(kernels::norm_sq_f32(a)) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("disjoint trigram sets give cosine zero") {
    // fixture chosen so the hashed buckets do not collide at dim 256
    const auto a = embedder.embed("αβγδ");
    const auto b = embedder.embed("κλμν");
    double cosine = 1.0;
    REQUIRE(kernels::cosine_f32(a, b, cosine));
    CHECK(cosine == doctest::Approx(0.0));
  }
  SUBCASE("unit norm on random fixtures") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 50; ++t) {
      const auto v = embedder.embed(testutil::random_greek_text(rng));
      CHECK(std::sqrt(kernels::norm_sq_f32(v)) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("short texts embed via boundary sentinels") {
    CHECK_NOTHROW(embedder.embed("α"));
    CHECK_NOTHROW(embedder.embed("αβ"));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(embedder.embed("   "), DataError);
    CHECK_THROWS_AS(TrigramEmbedder(4), ConfigError);
    CHECK_THROWS_AS(make_embedder("word2vec", 64), ConfigError);
  }
}

namespace {

// fixed-vector embedder for dominance tests
class TableEmbedder : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<float>> table)
      : table_(std::move(table)) {}
  size_t dim() const override { return table_.begin()->second.size(); }
  std::vector<float> embed(std::string_view text) const override {
    return table_.at(std::string(text));
  }

 private:
  std::map<std::string, std::vector<float>> table_;
};

}  // namespace

TEST_CASE("dynamic_selection") {
  SUBCASE("textually identical candidate ranks first") {
    const TrigramEmbedder embedder(256);
    Proverb query;
    query.id = "q";
    query.text = "του ύπνου και της ξενοιασιάς";
    ShotSet pool;
    pool.of(Sentiment::Positive) = {
        candidate("p1", Sentiment::Positive, 0.3, "άλλο κείμενο εντελώς"),
        candidate("p2", Sentiment::Positive, 0.4, query.text),
        candidate("p3", Sentiment::Positive, 0.1, "τρίτο άσχετο κείμενο")};
    pool.of(Sentiment::Negative) = {candidate("n1", Sentiment::Negative, 0.1, "αρνητικό ρητό")};
    pool.of(Sentiment::Ambiguous) = {candidate("a1", Sentiment::Ambiguous, 0.1, "διφορούμενο ρητό")};
    const ShotSet shots = dynamic_selection(query, pool, embedder, 1);
    CHECK(shots.of(Sentiment::Positive)[0].id == "p2");
  }
  SUBCASE("orthogonal embeddings leave one dominant candidate") {
    std::map<std::string, std::vector<float>> table;
    table["q"] = {1, 0, 0, 0};
    table["close"] = {0.9f, 0.1f, 0, 0};
    table["far1"] = {0, 1, 0, 0};
    table["far2"] = {0, 0, 1, 0};
    const TableEmbedder embedder(std::move(table));
    Proverb query;
    query.id = "query";
    query.text = "q";
    ShotSet pool;
    pool.of(Sentiment::Positive) = {candidate("c", Sentiment::Positive, 0.5, "close"),
                                    candidate("f1", Sentiment::Positive, 0.0, "far1"),
                                    candidate("f2", Sentiment::Positive, 0.0, "far2")};
    pool.of(Sentiment::Negative) = {candidate("n", Sentiment::Negative, 0.0, "far1")};
    pool.of(Sentiment::Ambiguous) = {candidate("a", Sentiment::Ambiguous, 0.0, "far2")};
    const ShotSet shots = dynamic_selection(query, pool, embedder, 1);
    CHECK(shots.of(Sentiment::Positive)[0].id == "c");
  }
  SUBCASE("zero-norm candidates are skipped with a warning") {
    std::map<std::string, std::vector<float>> table;
    table["q"] = {1, 0};
    table["zero"] = {0, 0};
    table["ok"] = {1, 1};
    const TableEmbedder embedder(std::move(table));
    Proverb query;
    query.id = "query";
    query.text = "q";
    ShotSet pool;
    pool.of(Sentiment::Positive) = {candidate("z", Sentiment::Positive, 0.0, "zero"),
                                    candidate("k", Sentiment::Positive, 0.0, "ok")};
    pool.of(Sentiment::Negative) = {candidate("n", Sentiment::Negative, 0.0, "ok")};
    pool.of(Sentiment::Ambiguous) = {candidate("a", Sentiment::Ambiguous, 0.0, "ok")};
    std::vector<std::string> warnings;
    const ShotSet shots = dynamic_selection(query, pool, embedder, 1, false,
                                            [&](const std::string& w) { warnings.push_back(w); });
    CHECK(shots.of(Sentiment::Positive)[0].id == "k");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("'z'") != std::string::npos);
    // class exhausted after skipping
    ShotSet all_zero;
    all_zero.of(Sentiment::Positive) = {candidate("z", Sentiment::Positive, 0.0, "zero")};
    all_zero.of(Sentiment::Negative) = {candidate("n", Sentiment::Negative, 0.0, "ok")};
    all_zero.of(Sentiment::Ambiguous) = {candidate("a", Sentiment::Ambiguous, 0.0, "ok")};
    CHECK_THROWS_AS(dynamic_selection(query, all_zero, embedder, 1), DataError);
  }
  SUBCASE("selection equals an exhaustive cosine recomputation") {
    std::mt19937_64 rng(23);
    const TrigramEmbedder embedder(128);
    for (int trial = 0; trial < 20; ++trial) {
      Proverb query;
      query.id = "q";
      query.text = testutil::random_greek_text(rng);
      ShotSet pool;
      std::set<std::string> texts;  // distinct texts keep rankings stable
      int i = 0;
      for (Sentiment s : kSentimentOrder) {
        for (int c = 0; c < 5; ++c) {
          std::string text = testutil::random_greek_text(rng);
          while (!texts.insert(text).second || text == query.text)
            text = testutil::random_greek_text(rng);
          pool.of(s).push_back(
              candidate("p" + std::to_string(++i), s, static_cast<double>(rng() % 10) / 10.0, text));
        }
      }
      const int k = 1 + rng() % 3;
      const ShotSet shots = dynamic_selection(query, pool, embedder, k);
      const auto qvec = embedder.embed(query.text);
      for (Sentiment s : kSentimentOrder) {
        // independent recomputation: argmax scan over all candidates
        std::vector<std::pair<double, std::string>> scored;
        for (const auto& c : pool.of(s)) {
          const auto cvec = embedder.embed(c.text);
          double num = 0, na = 0, nb = 0;
          for (size_t d = 0; d < cvec.size(); ++d) {
            num += static_cast<double>(qvec[d]) * cvec[d];
            na += static_cast<double>(qvec[d]) * qvec[d];
            nb += static_cast<double>(cvec[d]) * cvec[d];
          }
          scored.emplace_back(num / std::sqrt(na * nb), c.id);
        }
        std::sort(scored.begin(), scored.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        REQUIRE(shots.of(s).size() == static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) CHECK(shots.of(s)[j].id == scored[j].second);
      }
    }
  }
  SUBCASE("k equal to pool size returns the whole pool") {
    const TrigramEmbedder embedder(128);
    Proverb query;
    query.id = "q";
    query.text = "ερώτημα δίχως όμοιο";
    ShotSet pool;
    int i = 0;
    for (Sentiment s : kSentimentOrder)
      for (int c = 0; c < 3; ++c)
        pool.of(s).push_back(candidate("p" + std::to_string(++i), s, 0.1 * c,
                                       "κείμενο νούμερο " + std::to_string(i)));
    const ShotSet shots = dynamic_selection(query, pool, embedder, 3);
    for (Sentiment s : kSentimentOrder) {
      std::set<std::string> got, want;
      for (const auto& c : shots.of(s)) got.insert(c.id);
      for (const auto& c : pool.of(s)) want.insert(c.id);
      CHECK(got == want);
    }
  }
}
