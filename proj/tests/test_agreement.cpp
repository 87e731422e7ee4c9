#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "paremia/agreement.hpp"
#include "paremia/errors.hpp"

using namespace paremia;

namespace {

constexpr int P = 1, N = -1, A = 0;

std::vector<std::optional<int>> col(std::initializer_list<int> values) {
  std::vector<std::optional<int>> out;
  for (int v : values) out.emplace_back(v);
  return out;
}

AnnotationMatrix make_matrix(size_t items, size_t annotators) {
  AnnotationMatrix m;
  for (size_t i = 0; i < items; ++i) m.items.push_back("p" + std::to_string(i));
  for (size_t a = 0; a < annotators; ++a) m.annotators.push_back("a" + std::to_string(a));
  m.cells.assign(items * annotators, std::nullopt);
  return m;
}

AnnotationMatrix random_matrix(std::mt19937_64& rng, double missing_rate) {
  const size_t items = 2 + rng() % 29;
  const size_t annotators = 2 + rng() % 9;
  AnnotationMatrix m = make_matrix(items, annotators);
  for (size_t i = 0; i < items; ++i)
    for (size_t a = 0; a < annotators; ++a)
      if ((rng() % 100) >= static_cast<size_t>(missing_rate * 100))
        m.at(i, a) = static_cast<int>(rng() % 3) - 1;
  return m;
}

std::optional<double> alpha_oracle(const AnnotationMatrix& m) {
  std::vector<std::vector<std::optional<int>>> units;
  for (size_t i = 0; i < m.items.size(); ++i) {
    std::vector<std::optional<int>> unit;
    for (size_t a = 0; a < m.annotators.size(); ++a) unit.push_back(m.at(i, a));
    units.push_back(std::move(unit));
  }
  return oracles::alpha_bruteforce(units);
}

}  // namespace

TEST_CASE("cohen_kappa basics") {
  CHECK(cohen_kappa(col({P, N, A, P}), col({P, N, A, P})) == doctest::Approx(1.0));
  // hand oracle: p_o = 3/4, p_e = 1/2
  CHECK(cohen_kappa(col({P, P, N, N}), col({P, N, N, N})) == doctest::Approx(0.5));
  CHECK(cohen_kappa(col({P, P}), col({N, N})) <= 0.0);
  CHECK_THROWS_AS(cohen_kappa(col({P}), col({P})), DataError);
}

TEST_CASE("cohen_kappa with missing cells uses pairwise deletion") {
  std::vector<std::optional<int>> a = {P, std::nullopt, N, A, P};
  std::vector<std::optional<int>> b = {P, N, std::nullopt, A, N};
  // overlap is positions 0, 3, 4 -> labels (P,P), (A,A), (P,N)
  std::vector<int> xs = {P, A, P}, ys = {P, A, N};
  CHECK(cohen_kappa(a, b) == doctest::Approx(oracles::kappa_enumeration(xs, ys)));
}

TEST_CASE("cohen_kappa is symmetric and 1 on self") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::optional<int>> a, b;
    const size_t n = 2 + rng() % 20;
    bool constant = true;
    for (size_t i = 0; i < n; ++i) {
      a.emplace_back(static_cast<int>(rng() % 3) - 1);
      b.emplace_back(static_cast<int>(rng() % 3) - 1);
      if (i > 0 && a[i] != a[0]) constant = false;
    }
    CHECK(cohen_kappa(a, b) == doctest::Approx(cohen_kappa(b, a)));
    if (!constant) CHECK(cohen_kappa(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("kappa matches the enumeration oracle on random vectors") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    const size_t n = 2 + rng() % 30;
    std::vector<std::optional<int>> a, b;
    std::vector<int> xs, ys;
    for (size_t i = 0; i < n; ++i) {
      const int x = static_cast<int>(rng() % 3) - 1;
      const int y = static_cast<int>(rng() % 3) - 1;
      a.emplace_back(x);
      b.emplace_back(y);
      xs.push_back(x);
      ys.push_back(y);
    }
    CHECK(cohen_kappa(a, b) == doctest::Approx(oracles::kappa_enumeration(xs, ys)).epsilon(1e-9));
  }
}

TEST_CASE("krippendorff_alpha basics") {
  SUBCASE("perfect agreement is 1") {
    AnnotationMatrix m = make_matrix(4, 3);
    for (size_t i = 0; i < 4; ++i)
      for (size_t a = 0; a < 3; ++a) m.at(i, a) = static_cast<int>(i % 2);
    CHECK(krippendorff_alpha(m) == doctest::Approx(1.0));
  }
  SUBCASE("2 annotators x 4 items with one disagreement") {
    AnnotationMatrix m = make_matrix(4, 2);
    const int labels[4][2] = {{P, P}, {P, P}, {N, N}, {P, N}};
    for (size_t i = 0; i < 4; ++i)
      for (size_t a = 0; a < 2; ++a) m.at(i, a) = labels[i][a];
    const auto expected = alpha_oracle(m);
    REQUIRE(expected.has_value());
    // frozen from the brute-force oracle: 8/15
    CHECK(*expected == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
    CHECK(krippendorff_alpha(m) == doctest::Approx(*expected).epsilon(1e-9));
  }
  SUBCASE("missing cells restrict to pairable values") {
    AnnotationMatrix m = make_matrix(3, 3);
    m.at(0, 0) = P;
    m.at(0, 1) = P;
    m.at(1, 0) = N;
    m.at(1, 1) = A;
    m.at(1, 2) = N;
    m.at(2, 2) = P;  // unpairable, must not contribute
    const auto expected = alpha_oracle(m);
    REQUIRE(expected.has_value());
    CHECK(krippendorff_alpha(m) == doctest::Approx(*expected).epsilon(1e-9));
  }
  SUBCASE("no pairable item is an error") {
    AnnotationMatrix m = make_matrix(3, 2);
    m.at(0, 0) = P;
    m.at(1, 1) = N;
    CHECK_THROWS_WITH_AS(krippendorff_alpha(m), doctest::Contains("two or more labels"),
                         DataError);
  }
}

TEST_CASE("alpha matches the brute-force oracle on random matrices") {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 60) {
    AnnotationMatrix m = random_matrix(rng, 0.25);
    const auto expected = alpha_oracle(m);
    if (!expected) continue;
    double actual;
    try {
      actual = krippendorff_alpha(m);
    } catch (const DataError&) {
      continue;  // no pairable unit
    }
    CHECK(actual == doctest::Approx(*expected).epsilon(1e-9));
    ++checked;
  }
}

TEST_CASE("alpha is invariant to item and annotator permutations") {
  std::mt19937_64 rng(99);
  AnnotationMatrix m = random_matrix(rng, 0.2);
  double base;
  try {
    base = krippendorff_alpha(m);
  } catch (const DataError&) {
    return;
  }
  // permute items
  AnnotationMatrix items_permuted = m;
  std::vector<size_t> perm(m.items.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t a = 0; a < m.annotators.size(); ++a)
      items_permuted.at(i, a) = m.at(perm[i], a);
  CHECK(krippendorff_alpha(items_permuted) == doctest::Approx(base).epsilon(1e-12));
  // permute annotators
  AnnotationMatrix anns_permuted = m;
  std::vector<size_t> aperm(m.annotators.size());
  for (size_t a = 0; a < aperm.size(); ++a) aperm[a] = a;
  std::shuffle(aperm.begin(), aperm.end(), rng);
  for (size_t i = 0; i < m.items.size(); ++i)
    for (size_t a = 0; a < aperm.size(); ++a)
      anns_permuted.at(i, a) = m.at(i, aperm[a]);
  CHECK(krippendorff_alpha(anns_permuted) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("for 2 full annotators alpha approaches kappa") {
  std::mt19937_64 rng(123);
  const size_t n = 500;
  AnnotationMatrix m = make_matrix(n, 2);
  std::vector<std::optional<int>> a, b;
  for (size_t i = 0; i < n; ++i) {
    const int x = static_cast<int>(rng() % 3) - 1;
    // correlated second rater
    const int y = (rng() % 4 == 0) ? static_cast<int>(rng() % 3) - 1 : x;
    m.at(i, 0) = x;
    m.at(i, 1) = y;
    a.emplace_back(x);
    b.emplace_back(y);
  }
  CHECK(std::abs(krippendorff_alpha(m) - cohen_kappa(a, b)) < 0.05);
}

TEST_CASE("correlation matrix") {
  SUBCASE("diagonal and exact reversal") {
    AnnotationMatrix m = make_matrix(3, 2);
    const int a[] = {N, A, P};
    const int b[] = {P, A, N};
    for (size_t i = 0; i < 3; ++i) {
      m.at(i, 0) = a[i];
      m.at(i, 1) = b[i];
    }
    for (auto method : {CorrelationMethod::Pearson, CorrelationMethod::Spearman}) {
      const auto corr = correlation_matrix(m, method);
      CHECK(*corr[0] == doctest::Approx(1.0));   // self
      CHECK(*corr[3] == doctest::Approx(1.0));
      CHECK(*corr[1] == doctest::Approx(-1.0));  // reversal
    }
  }
  SUBCASE("hand covariance oracle") {
    AnnotationMatrix m = make_matrix(4, 2);
    const int a[] = {N, N, A, P};
    const int b[] = {N, A, A, P};
    for (size_t i = 0; i < 4; ++i) {
      m.at(i, 0) = a[i];
      m.at(i, 1) = b[i];
    }
    const auto corr = correlation_matrix(m, CorrelationMethod::Pearson);
    // direct-formula oracle gives 8/sqrt(88) = sqrt(8/11) ~= 0.852803
    std::vector<double> xs = {-1, -1, 0, 1}, ys = {-1, 0, 0, 1};
    const auto expected = oracles::pearson_direct(xs, ys);
    REQUIRE(expected.has_value());
    CHECK(*expected == doctest::Approx(std::sqrt(8.0 / 11.0)).epsilon(1e-12));
    CHECK(*corr[1] == doctest::Approx(*expected).epsilon(1e-9));
  }
  SUBCASE("zero variance is undefined, excluded from means") {
    AnnotationMatrix m = make_matrix(4, 3);
    for (size_t i = 0; i < 4; ++i) {
      m.at(i, 0) = static_cast<int>(i % 2);
      m.at(i, 1) = static_cast<int>(i % 2);
      m.at(i, 2) = P;  // constant rater
    }
    const auto corr = correlation_matrix(m, CorrelationMethod::Pearson);
    CHECK_FALSE(corr[2].has_value());
    CHECK_FALSE(corr[5].has_value());
    const auto means = mean_offdiagonal(corr, 3);
    CHECK(*means[0] == doctest::Approx(1.0));  // only the defined pair counts
  }
  SUBCASE("spearman equals pearson on midranks") {
    std::mt19937_64 rng(31);
    AnnotationMatrix m = make_matrix(20, 2);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < 20; ++i) {
      const int x = static_cast<int>(rng() % 3) - 1;
      const int y = static_cast<int>(rng() % 3) - 1;
      m.at(i, 0) = x;
      m.at(i, 1) = y;
      xs.push_back(x);
      ys.push_back(y);
    }
    const auto corr = correlation_matrix(m, CorrelationMethod::Spearman);
    const auto rx = oracles::average_ranks(xs);
    const auto ry = oracles::average_ranks(ys);
    const auto expected = oracles::pearson_direct(rx, ry);
    if (expected) CHECK(*corr[1] == doctest::Approx(*expected).epsilon(1e-9));
  }
}

TEST_CASE("flag_outlier_annotators") {
  AnnotationMatrix m = make_matrix(1, 3);
  SUBCASE("one annotator below threshold") {
    const std::vector<std::optional<double>> corr = {
        1.0, 0.8, 0.05,
        0.8, 1.0, 0.05,
        0.05, 0.05, 1.0};
    const auto flagged = flag_outlier_annotators(m, corr, 0.15);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == "a2");
  }
  SUBCASE("none below threshold") {
    const std::vector<std::optional<double>> corr = {
        1.0, 0.5, 0.4,
        0.5, 1.0, 0.6,
        0.4, 0.6, 1.0};
    CHECK(flag_outlier_annotators(m, corr, 0.15).empty());
  }
  SUBCASE("all below, worst first") {
    const std::vector<std::optional<double>> corr2 = {
        1.0, 0.1, 0.05,
        0.1, 1.0, 0.0,
        0.05, 0.0, 1.0};
    // means: a0 = 0.075, a1 = 0.05, a2 = 0.025
    const auto flagged = flag_outlier_annotators(m, corr2, 0.15);
    REQUIRE(flagged.size() == 3);
    CHECK(flagged[0] == "a2");
    CHECK(flagged[1] == "a1");
    CHECK(flagged[2] == "a0");
  }
}

TEST_CASE("agreement report over a corpus-backed matrix") {
  Corpus corpus;
  for (int i = 0; i < 6; ++i) {
    Proverb p;
    p.id = "p" + std::to_string(i);
    p.text = "κείμενο";
    corpus.proverbs.push_back(std::move(p));
  }
  std::mt19937_64 rng(55);
  for (const char* aid : {"a1", "a2", "a3"}) {
    corpus.annotator_ids.push_back(aid);
    for (int i = 0; i < 6; ++i) {
      AnnotationRecord r;
      r.proverb_id = "p" + std::to_string(i);
      r.annotator_id = aid;
      r.sentiment = kSentimentOrder[rng() % 3];
      corpus.annotations.push_back(std::move(r));
    }
  }
  const auto matrix = AnnotationMatrix::sentiment(corpus);
  CHECK(matrix.items.size() == 6);
  CHECK(matrix.annotators.size() == 3);
  const auto report = agreement_report(matrix, 0.15);
  CHECK(report.kappa_pairwise.size() == 9);
  const std::string json = agreement_report_to_json(report);
  CHECK(json.find("\"alpha\"") != std::string::npos);
  CHECK(json.find("\"kappa_mean\"") != std::string::npos);

  // dropping an annotator shrinks the matrix
  const std::vector<std::string> drop = {"a2"};
  const auto reduced = matrix.without_annotators(drop);
  CHECK(reduced.annotators.size() == 2);
  CHECK(reduced.cells.size() == 12);
}
