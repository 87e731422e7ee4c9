#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paremia {

struct NormalizeOptions {
  bool fold_case = false;
  bool strip_diacritics = false;
};

// Canonical text form: NFC, optional full case folding, optional removal of
// combining marks, whitespace trimmed and internal runs collapsed to single
// spaces. Total over all inputs; malformed UTF-8 bytes become U+FFFD.
std::string normalize_text(std::string_view text, const NormalizeOptions& opts = {});

// UTF-8 <-> code point helpers (U+FFFD for malformed input bytes).
std::vector<uint32_t> to_codepoints(std::string_view utf8);
std::string from_codepoints(std::span<const uint32_t> cps);
std::string from_codepoint(uint32_t cp);

}  // namespace paremia
