#include "paremia/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <cassert>

namespace paremia {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  assert(U_SUCCESS(status) && n != nullptr);
  return *n;
}

const icu::Normalizer2& nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  assert(U_SUCCESS(status) && n != nullptr);
  return *n;
}

icu::UnicodeString remove_combining_marks(const icu::UnicodeString& in) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString decomposed = nfd().normalize(in, status);
  icu::UnicodeString kept;
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    if (u_charType(c) != U_NON_SPACING_MARK) kept.append(c);
    i += U16_LENGTH(c);
  }
  icu::UnicodeString out = nfc().normalize(kept, status);
  return U_SUCCESS(status) ? out : in;
}

}  // namespace

std::string normalize_text(std::string_view text, const NormalizeOptions& opts) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));

  UErrorCode status = U_ZERO_ERROR;
  us = nfc().normalize(us, status);
  if (opts.fold_case) {
    us.foldCase(U_FOLD_CASE_DEFAULT);
    // Folding can emit decomposed sequences (e.g. U+0130), keep NFC form.
    us = nfc().normalize(us, status);
  }
  if (opts.strip_diacritics) us = remove_combining_marks(us);

  icu::UnicodeString collapsed;
  bool pending_space = false;
  bool seen_char = false;
  for (int32_t i = 0; i < us.length();) {
    const UChar32 c = us.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = seen_char;
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar32>(' '));
      pending_space = false;
    }
    collapsed.append(c);
    seen_char = true;
  }

  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

std::vector<uint32_t> to_codepoints(std::string_view utf8) {
  std::vector<uint32_t> cps;
  cps.reserve(utf8.size());
  size_t i = 0;
  const auto bad = [&](size_t advance) {
    cps.push_back(0xFFFD);
    i += advance;
  };
  while (i < utf8.size()) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    if (b0 < 0x80) {
      cps.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      bad(1);
      continue;
    }
    if (i + len > utf8.size()) {
      bad(1);
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto bk = static_cast<unsigned char>(utf8[i + k]);
      if ((bk & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3F);
    }
    const uint32_t min_cp = len == 2 ? 0x80 : len == 3 ? 0x800 : 0x10000;
    if (!ok || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad(1);
      continue;
    }
    cps.push_back(cp);
    i += len;
  }
  return cps;
}

std::string from_codepoints(std::span<const uint32_t> cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (uint32_t cp : cps) out += from_codepoint(cp);
  return out;
}

std::string from_codepoint(uint32_t cp) {
  std::string out;
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

}  // namespace paremia
