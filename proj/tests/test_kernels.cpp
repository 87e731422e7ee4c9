#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "paremia/kernels/kernels.hpp"

using namespace paremia;

TEST_CASE("scalar levenshtein kernel matches the full-table oracle") {
  std::mt19937_64 rng(301);
  for (int t = 0; t < 500; ++t) {
    const size_t la = rng() % 20, lb = rng() % 20;
    std::vector<uint32_t> a(la), b(lb);
    for (auto& c : a) c = 0x370 + rng() % 80;
    for (auto& c : b) c = 0x370 + rng() % 80;
    CHECK(kernels::scalar().levenshtein_u32(a, b) == oracles::levenshtein_full_table(a, b));
  }
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  const kernels::Kernels* simd = kernels::avx2();
  if (simd == nullptr) {
    MESSAGE("AVX2 not available on this host, dispatch falls back to scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    return;
  }
  std::mt19937_64 rng(302);
  SUBCASE("levenshtein exact equality, adversarial small alphabet") {
    for (int t = 0; t < 1500; ++t) {
      const size_t la = rng() % 60, lb = rng() % 60;
      std::vector<uint32_t> a(la), b(lb);
      for (auto& c : a) c = 0x3B1 + rng() % 5;
      for (auto& c : b) c = 0x3B1 + rng() % 5;
      CHECK(simd->levenshtein_u32(a, b) == kernels::scalar().levenshtein_u32(a, b));
    }
  }
  SUBCASE("levenshtein on empty and single-char inputs") {
    const std::vector<uint32_t> empty, one = {0x3B1};
    CHECK(simd->levenshtein_u32(empty, empty) == 0);
    CHECK(simd->levenshtein_u32(empty, one) == 1);
    CHECK(simd->levenshtein_u32(one, empty) == 1);
    CHECK(simd->levenshtein_u32(one, one) == 0);
  }
  SUBCASE("dot and norm within 1e-12 relative") {
    std::normal_distribution<float> nd;
    for (int t = 0; t < 50; ++t) {
      const size_t n = 1 + rng() % 700;
      std::vector<float> x(n), y(n);
      for (size_t i = 0; i < n; ++i) {
        x[i] = nd(rng);
        y[i] = nd(rng);
      }
      const double ds = kernels::scalar().dot_f32(x, y);
      const double dv = simd->dot_f32(x, y);
      CHECK(dv == doctest::Approx(ds).epsilon(1e-12));
      CHECK(simd->norm_sq_f32(x) == doctest::Approx(kernels::scalar().norm_sq_f32(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cosine is undefined for zero vectors") {
  const std::vector<float> zero(16, 0.0f), unit = [] {
    std::vector<float> v(16, 0.0f);
    v[3] = 1.0f;
    return v;
  }();
  double out = 0.0;
  CHECK_FALSE(kernels::cosine_f32(zero, unit, out));
  CHECK(kernels::cosine_f32(unit, unit, out));
  CHECK(out == doctest::Approx(1.0));
}
