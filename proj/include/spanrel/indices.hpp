#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "spanrel/lexicon.hpp"
#include "spanrel/tokenize.hpp"
#include "spanrel/unicode.hpp"

namespace spanrel {

/// The seven per-span linguistic indices, in report order.
enum class Index {
  ProperNouns,
  AvgSyllables,
  Fkgl,
  Stopwords,
  Pronouns,
  Hedge,
  Negation,
};

inline constexpr std::size_t kIndexCount = 7;

inline constexpr std::array<Index, kIndexCount> kAllIndices{
    Index::ProperNouns, Index::AvgSyllables, Index::Fkgl,    Index::Stopwords,
    Index::Pronouns,    Index::Hedge,        Index::Negation,
};

inline std::size_t index_position(Index i) { return static_cast<std::size_t>(i); }

/// Machine name used as a column/key.
inline std::string_view index_key(Index i) {
  constexpr std::array<std::string_view, kIndexCount> keys{
      "prop_proper_nouns", "avg_syllables", "fkgl",           "prop_stopwords",
      "prop_pronouns",     "hedge_present", "negation_present"};
  return keys[index_position(i)];
}

/// Human-readable label for report tables.
inline std::string_view index_label(Index i) {
  constexpr std::array<std::string_view, kIndexCount> labels{
      "Proportion of proper nouns", "Average syllables",  "FKGL (Readability)",
      "Proportion of stopwords",    "Proportion of pronouns", "Hedge presence",
      "Negation presence"};
  return labels[index_position(i)];
}

inline bool is_binary(Index i) { return i == Index::Hedge || i == Index::Negation; }

inline std::optional<Index> parse_index(std::string_view key) {
  for (Index i : kAllIndices) {
    if (index_key(i) == key) return i;
  }
  return std::nullopt;
}

inline constexpr double kFkglSentenceWeight = 0.39;
inline constexpr double kFkglSyllableWeight = 11.8;
inline constexpr double kFkglOffset = 15.59;

struct IndexVector {
  double fkgl = 0.0;
  double avg_syllables = 0.0;
  double prop_proper_nouns = 0.0;
  double prop_stopwords = 0.0;
  double prop_pronouns = 0.0;
  int hedge_present = 0;
  int negation_present = 0;
  std::size_t n_words = 0;
  std::size_t n_sentences = 0;
  std::size_t n_syllables = 0;
  std::size_t n_stopwords = 0;
  std::size_t n_pronouns = 0;
  std::size_t n_proper_nouns = 0;

  /// False for wordless spans; such spans carry no index values.
  bool defined() const { return n_words > 0; }

  double value(Index i) const {
    switch (i) {
      case Index::ProperNouns: return prop_proper_nouns;
      case Index::AvgSyllables: return avg_syllables;
      case Index::Fkgl: return fkgl;
      case Index::Stopwords: return prop_stopwords;
      case Index::Pronouns: return prop_pronouns;
      case Index::Hedge: return hedge_present;
      case Index::Negation: return negation_present;
    }
    return 0.0;
  }

  friend bool operator==(const IndexVector&, const IndexVector&) = default;
};

namespace detail {

// Uppercase initial, and either some lowercase letter or all-caps of length
// >= 2 ("Coumadin", "MI").
inline bool capitalized_shape(std::u32string_view surface) {
  if (surface.empty() || !unicode::is_upper(surface.front())) return false;
  std::size_t letters = 0;
  bool any_lower = false;
  bool all_upper = true;
  for (char32_t c : surface) {
    if (!unicode::is_alphabetic(c)) continue;
    ++letters;
    if (unicode::is_lower(c)) any_lower = true;
    if (!unicode::is_upper(c)) all_upper = false;
  }
  return any_lower || (all_upper && letters >= 2);
}

}  // namespace detail

inline IndexVector compute_index_vector(std::string_view span_text, const LexiconBundle& lex) {
  const std::u32string text = unicode::decode(span_text);
  const std::vector<Token> tokens = tokenize(text);
  const std::vector<std::size_t> sentence = sentence_ids(text, tokens);

  IndexVector v;
  std::size_t last_sentence_with_word = static_cast<std::size_t>(-1);
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    if (!t.is_word) continue;
    ++v.n_words;
    const std::u32string_view surface = std::u32string_view(text).substr(
        t.char_start, t.char_end - t.char_start);
    v.n_syllables += count_syllables(surface);
    const bool stop = lex.stopwords.contains(t.folded);
    if (stop) ++v.n_stopwords;
    if (lex.pronouns.contains(t.folded)) ++v.n_pronouns;
    const bool sentence_initial = sentence[k] != last_sentence_with_word;
    last_sentence_with_word = sentence[k];
    if (!sentence_initial && !stop && detail::capitalized_shape(surface)) ++v.n_proper_nouns;
  }
  v.n_sentences = count_sentences(text, tokens);
  v.hedge_present = match_cues(tokens, lex.hedges);
  v.negation_present = match_cues(tokens, lex.negations);
  if (v.n_words == 0) return v;

  const double words = static_cast<double>(v.n_words);
  v.avg_syllables = static_cast<double>(v.n_syllables) / words;
  v.prop_stopwords = static_cast<double>(v.n_stopwords) / words;
  v.prop_pronouns = static_cast<double>(v.n_pronouns) / words;
  v.prop_proper_nouns = static_cast<double>(v.n_proper_nouns) / words;
  v.fkgl = kFkglSentenceWeight * (words / static_cast<double>(v.n_sentences)) +
           kFkglSyllableWeight * v.avg_syllables - kFkglOffset;
  return v;
}

}  // namespace spanrel
