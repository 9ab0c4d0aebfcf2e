#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spanrel/builtin_lexicons.hpp"
#include "spanrel/error.hpp"
#include "spanrel/tokenize.hpp"
#include "spanrel/unicode.hpp"

namespace spanrel {

/// Cue list split into single words and multiword phrases. Entries are
/// stored folded (lowercase, ASCII apostrophes).
class CueLexicon {
 public:
  CueLexicon() = default;

  template <class Range>
  explicit CueLexicon(const Range& entries) {
    for (const auto& e : entries) add(std::string_view(e));
  }

  void add(std::string_view entry) {
    std::vector<std::string> words;
    for (const auto& t : tokenize(entry)) words.push_back(t.folded);
    if (words.empty()) throw ValidationError("empty cue entry");
    if (words.size() == 1) {
      single_.insert(words.front());
    } else {
      multi_.insert(std::move(words));
    }
  }

  const std::set<std::string>& single_word_cues() const { return single_; }
  const std::set<std::vector<std::string>>& multiword_cues() const { return multi_; }
  std::size_t size() const { return single_.size() + multi_.size(); }

  /// All entries re-joined with single spaces, sorted.
  std::set<std::string> entries() const {
    std::set<std::string> out(single_.begin(), single_.end());
    for (const auto& words : multi_) {
      std::string joined;
      for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
      out.insert(joined);
    }
    return out;
  }

 private:
  std::set<std::string> single_;
  std::set<std::vector<std::string>> multi_;
};

/// Folded word set used for stopword and pronoun membership.
class WordSet {
 public:
  WordSet() = default;

  template <class Range>
  explicit WordSet(const Range& entries) {
    for (const auto& e : entries) insert(std::string_view(e));
  }

  void insert(std::string_view word) {
    auto folded = unicode::fold(word);
    if (folded.empty()) throw ValidationError("empty word entry");
    words_.insert(std::move(folded));
  }

  bool contains(const std::string& folded) const { return words_.count(folded) != 0; }
  const std::set<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

using StopwordSet = WordSet;
using PronounSet = WordSet;

/// Everything compute_index_vector needs.
struct LexiconBundle {
  StopwordSet stopwords;
  CueLexicon hedges;
  CueLexicon negations;
  PronounSet pronouns;

  /// Pronouns that are not stopwords. When empty, prop_pronouns can never
  /// exceed prop_stopwords for any text.
  std::vector<std::string> pronouns_outside_stopwords() const {
    std::vector<std::string> out;
    for (const auto& p : pronouns.words()) {
      if (!stopwords.contains(p)) out.push_back(p);
    }
    return out;
  }

  static LexiconBundle builtin() {
    return {StopwordSet(builtin::kStopwords), CueLexicon(builtin::kHedgeCues),
            CueLexicon(builtin::kNegationCues), PronounSet(builtin::kPronouns)};
  }
};

/// One entry per non-blank line; '#' starts a comment line.
inline std::vector<std::string> read_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

/// 1 iff a single-word cue equals a word token, or a multiword cue equals a
/// run of consecutive word tokens (no punctuation token in between).
/// Matching is on whole tokens only.
inline int match_cues(const std::vector<Token>& tokens, const CueLexicon& lexicon) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_word) continue;
    if (lexicon.single_word_cues().count(tokens[i].folded)) return 1;
    for (const auto& cue : lexicon.multiword_cues()) {
      if (i + cue.size() > tokens.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < cue.size() && ok; ++k) {
        const Token& t = tokens[i + k];
        ok = t.is_word && t.folded == cue[k];
      }
      if (ok) return 1;
    }
  }
  return 0;
}

}  // namespace spanrel
