#include <doctest.h>

#include <random>

#include "paremia/text.hpp"
#include "util.hpp"

using namespace paremia;

TEST_CASE("whitespace is trimmed and collapsed") {
  CHECK(normalize_text("  Όποιος  βιάζεται ") == "Όποιος βιάζεται");
  CHECK(normalize_text("α\t\nβ") == "α β");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text(" \t\n ") == "");
  CHECK(normalize_text("α β") == "α β");  // NBSP counts as whitespace
}

TEST_CASE("canonical composition merges combining marks") {
  // alpha + combining acute composes to the precomposed form
  const std::string decomposed = "ά";
  const std::string precomposed = "ά";
  CHECK(normalize_text(decomposed) == precomposed);
  CHECK(normalize_text(decomposed) == normalize_text(precomposed));
}

TEST_CASE("diacritic stripping") {
  NormalizeOptions strip{.fold_case = false, .strip_diacritics = true};
  CHECK(normalize_text("γενιά", strip) == "γενια");
  CHECK(normalize_text("ΐ", strip) == "ι");  // iota with dialytika and tonos
  CHECK(normalize_text("ώρα καλή", strip) == "ωρα καλη");
}

TEST_CASE("case folding") {
  NormalizeOptions fold{.fold_case = true};
  CHECK(normalize_text("ΝΎΧΤΑ", fold) == "νύχτα");
  CHECK(normalize_text("Σ", fold) == "σ");
  CHECK(normalize_text("ς", fold) == "σ");  // final sigma folds for matching
}

TEST_CASE("normalize_text is idempotent") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    NormalizeOptions opts{.fold_case = (rng() & 1) != 0, .strip_diacritics = (rng() & 1) != 0};
    std::string text = "  " + testutil::random_greek_text(rng) + "  " +
                       testutil::random_greek_word(rng) + "\t";
    const std::string once = normalize_text(text, opts);
    CHECK(normalize_text(once, opts) == once);
  }
}

TEST_CASE("codepoint round-trip and error handling") {
  const std::string text = "αβγ abc ώ";
  CHECK(from_codepoints(to_codepoints(text)) == text);
  // malformed continuation byte becomes U+FFFD
  const auto cps = to_codepoints("\x80");
  REQUIRE(cps.size() == 1);
  CHECK(cps[0] == 0xFFFD);
  // truncated multibyte sequence
  const auto cps2 = to_codepoints("\xCE");
  REQUIRE(cps2.size() == 1);
  CHECK(cps2[0] == 0xFFFD);
}
