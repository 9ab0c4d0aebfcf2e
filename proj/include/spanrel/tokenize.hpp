#pragma once

// Rule-based tokenizer, sentence segmenter and syllable counter.
//
// Tokens are maximal runs of word characters (letters, digits, combining
// marks). A run may continue across '-', '.', or an apostrophe when the
// character on each side is a word character, and across ',' between digits.
// A trailing clitic ('s 'd 'll 'm 're 've n't) is split into its own token.
// Every other non-space character is a one-character token. The text between
// consecutive tokens is therefore always whitespace.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "spanrel/error.hpp"
#include "spanrel/unicode.hpp"

namespace spanrel {

struct Token {
  std::string surface;
  std::size_t char_start = 0;  // code-point offsets into the tokenized text
  std::size_t char_end = 0;
  bool is_word = false;        // contains an alphabetic character
  std::size_t doc_token_index = 0;
  std::string folded;          // lowercased, apostrophes normalized
};

namespace detail {

inline bool is_word_char(char32_t c) {
  return unicode::is_alphabetic(c) || unicode::is_digit(c) || unicode::is_mark(c);
}

inline bool joins_word(char32_t prev, char32_t c, char32_t next) {
  if (!is_word_char(prev) || !is_word_char(next)) return false;
  if (c == U'-' || c == U'.' || unicode::is_apostrophe(c)) return true;
  return c == U',' && unicode::is_digit(prev) && unicode::is_digit(next);
}

/// Position inside [start, end) where a trailing clitic begins, or end.
inline std::size_t clitic_split(std::u32string_view text, std::size_t start, std::size_t end) {
  const std::size_t len = end - start;
  auto lower_at = [&](std::size_t i) { return unicode::to_lower(text[i]); };
  if (len > 3 && lower_at(end - 3) == U'n' && unicode::is_apostrophe(text[end - 2]) &&
      lower_at(end - 1) == U't' && unicode::is_alphabetic(text[end - 4])) {
    return end - 3;
  }
  for (std::size_t suffix : {1u, 2u}) {
    if (len < suffix + 2) continue;
    const std::size_t apos = end - suffix - 1;
    if (!unicode::is_apostrophe(text[apos])) continue;
    std::u32string tail;
    for (std::size_t i = apos + 1; i < end; ++i) tail.push_back(lower_at(i));
    if (tail == U"s" || tail == U"d" || tail == U"m" || tail == U"ll" || tail == U"re" ||
        tail == U"ve") {
      return apos;
    }
  }
  return end;
}

inline bool has_alphabetic(std::u32string_view text) {
  for (char32_t c : text) {
    if (unicode::is_alphabetic(c)) return true;
  }
  return false;
}

}  // namespace detail

inline std::vector<Token> tokenize(std::u32string_view text) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t start, std::size_t end) {
    Token t;
    auto piece = text.substr(start, end - start);
    t.surface = unicode::encode(piece);
    t.char_start = start;
    t.char_end = end;
    t.is_word = detail::has_alphabetic(piece);
    t.doc_token_index = tokens.size();
    t.folded = unicode::fold(piece);
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (unicode::is_space(c)) {
      ++i;
      continue;
    }
    if (!detail::is_word_char(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size()) {
      if (detail::is_word_char(text[j])) {
        ++j;
      } else if (j + 1 < text.size() && detail::joins_word(text[j - 1], text[j], text[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    const std::size_t split = detail::clitic_split(text, i, j);
    emit(i, split);
    if (split != j) emit(split, j);
    i = j;
  }
  return tokens;
}

inline std::vector<Token> tokenize(std::string_view utf8) { return tokenize(unicode::decode(utf8)); }

/// Sentence id for every token. A sentence ends after a '.', '!' or '?' token
/// followed by whitespace or end of text, and at any line break between
/// tokens. Ids count only sentences that contain a word token; tokens before
/// the first word of a sentence share that sentence's id.
inline std::vector<std::size_t> sentence_ids(std::u32string_view text,
                                             const std::vector<Token>& tokens) {
  std::vector<std::size_t> ids(tokens.size(), 0);
  std::size_t current = 0;
  bool has_word = false;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    if (k > 0) {
      bool boundary = false;
      const Token& prev = tokens[k - 1];
      for (std::size_t p = prev.char_end; p < t.char_start; ++p) {
        if (unicode::is_line_break(text[p])) boundary = true;
      }
      const bool terminator = prev.char_end - prev.char_start == 1 &&
                              (text[prev.char_start] == U'.' || text[prev.char_start] == U'!' ||
                               text[prev.char_start] == U'?');
      if (terminator && prev.char_end < t.char_start) boundary = true;
      if (boundary && has_word) {
        ++current;
        has_word = false;
      }
    }
    ids[k] = current;
    has_word = has_word || t.is_word;
  }
  return ids;
}

/// Number of sentences holding at least one word token (0 for wordless text).
inline std::size_t count_sentences(std::u32string_view text, const std::vector<Token>& tokens) {
  auto ids = sentence_ids(text, tokens);
  std::size_t n = 0;
  std::vector<bool> seen;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (!tokens[k].is_word) continue;
    if (ids[k] >= seen.size()) seen.resize(ids[k] + 1, false);
    if (!seen[ids[k]]) {
      seen[ids[k]] = true;
      ++n;
    }
  }
  return n;
}

inline std::size_t split_sentences(std::string_view utf8) {
  auto text = unicode::decode(utf8);
  return count_sentences(text, tokenize(text));
}

/// Vowel-group syllable heuristic: count maximal groups of a/e/i/o/u/y,
/// drop a final 'e' that stands alone after a consonant (but keep
/// consonant + "le"), floor at 1.
inline std::size_t count_syllables(std::u32string_view word) {
  if (!detail::has_alphabetic(word)) {
    throw ComputationError("count_syllables: \"" + unicode::encode(word) + "\" is not a word");
  }
  std::u32string letters;
  for (char32_t c : word) {
    if (unicode::is_alphabetic(c)) letters.push_back(unicode::to_lower(c));
  }
  auto is_vowel = [](char32_t c) {
    return c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'u' || c == U'y';
  };
  std::size_t groups = 0;
  bool in_group = false;
  for (char32_t c : letters) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = letters.size();
  if (n >= 2 && letters[n - 1] == U'e' && !is_vowel(letters[n - 2])) {
    const bool consonant_le = letters[n - 2] == U'l' && n >= 3 && !is_vowel(letters[n - 3]);
    if (!consonant_le && groups > 0) --groups;
  }
  return groups == 0 ? 1 : groups;
}

inline std::size_t count_syllables(std::string_view utf8) {
  return count_syllables(unicode::decode(utf8));
}

}  // namespace spanrel
