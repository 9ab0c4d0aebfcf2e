#pragma once

// Thin helpers over ICU. Text is stored as UTF-8; positions exposed by the
// library are Unicode scalar-value indices.

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "spanrel/error.hpp"

namespace spanrel::unicode {

/// Decodes UTF-8 into code points. Throws ValidationError on malformed input.
inline std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw ValidationError("invalid UTF-8 at byte " + std::to_string(i - 1));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) throw ValidationError("code point not encodable as UTF-8");
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append_utf8(out, c);
  return out;
}

/// Canonical composition (NFC).
inline std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw ComputationError("ICU NFC normalizer unavailable");
  decode(utf8);  // reject malformed input before ICU substitutes U+FFFD
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) throw ComputationError("NFC normalization failed");
  std::string out;
  dst.toUTF8String(out);
  return out;
}

inline std::size_t length(std::string_view utf8) { return decode(utf8).size(); }

/// Substring by code-point positions [start, end).
inline std::string substr(std::u32string_view text, std::size_t start, std::size_t end) {
  return encode(text.substr(start, end - start));
}

inline bool is_alphabetic(char32_t c) {
  return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_ALPHABETIC);
}

inline bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

inline bool is_mark(char32_t c) {
  return (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) != 0;
}

inline bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

inline bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

inline bool is_upper(char32_t c) { return u_isUUppercase(static_cast<UChar32>(c)); }

inline bool is_lower(char32_t c) { return u_isULowercase(static_cast<UChar32>(c)); }

inline bool is_line_break(char32_t c) {
  return c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' || c == 0x85 ||
         c == 0x2028 || c == 0x2029;
}

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019 || c == 0x2018; }

inline char32_t to_lower(char32_t c) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
}

/// Simple per-code-point lowercase with typographic apostrophes folded to
/// ASCII, so lexicon entries such as "n't" match either spelling.
inline std::string fold(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append_utf8(out, is_apostrophe(c) ? U'\'' : to_lower(c));
  return out;
}

inline std::string fold(std::string_view utf8) { return fold(decode(utf8)); }

}  // namespace spanrel::unicode
