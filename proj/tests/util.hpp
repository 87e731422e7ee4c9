#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testutil {

// Self-cleaning scratch directory for file-based tests.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("paremia_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Random Greek-ish word of 1..max_len letters (monotonic alphabet plus a
// few accented vowels).
inline std::string random_greek_word(std::mt19937_64& rng, size_t max_len = 8) {
  static const std::vector<std::string> letters = {
      "α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ",
      "ν", "ξ", "ο", "π", "ρ", "σ", "τ", "υ", "φ", "χ", "ψ", "ω",
      "ά", "έ", "ή", "ί", "ό", "ύ", "ώ"};
  const size_t len = 1 + rng() % max_len;
  std::string out;
  for (size_t i = 0; i < len; ++i) out += letters[rng() % letters.size()];
  return out;
}

inline std::string random_greek_text(std::mt19937_64& rng, size_t max_words = 6) {
  const size_t words = 1 + rng() % max_words;
  std::string out;
  for (size_t i = 0; i < words; ++i) {
    if (i) out += " ";
    out += random_greek_word(rng);
  }
  return out;
}

}  // namespace testutil
