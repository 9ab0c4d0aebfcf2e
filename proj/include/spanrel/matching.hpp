#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spanrel/corpus.hpp"
#include "spanrel/tokenize.hpp"
#include "spanrel/unicode.hpp"

namespace spanrel {

enum class MatchKind { Exact, IoU };

struct MatchCriterion {
  MatchKind kind = MatchKind::Exact;
  double iou_threshold = 0.5;

  static MatchCriterion exact() { return {MatchKind::Exact, 0.5}; }
  static MatchCriterion iou(double threshold = 0.5) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
      throw std::invalid_argument("iou_threshold must lie in (0, 1]");
    }
    return {MatchKind::IoU, threshold};
  }

  std::string name() const { return kind == MatchKind::Exact ? "exact" : "iou"; }
};

/// Half-open range of document token indices.
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

struct MatchOutcome {
  std::string span_id;
  std::string doc_id;
  DecisionCategory category{};
  int is_matched = 0;
  MatchCriterion criterion;
  double best_iou = 0.0;        // IoU mode only
  bool no_token_coverage = false;
};

/// Lowercase, collapse whitespace runs to one space, strip whitespace and
/// punctuation from both ends. Idempotent.
inline std::string normalize_span_text(std::string_view text) {
  const std::u32string s = unicode::decode(text);
  auto strippable = [](char32_t c) { return unicode::is_space(c) || unicode::is_punct(c); };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && strippable(s[b])) ++b;
  while (e > b && strippable(s[e - 1])) --e;
  std::u32string out;
  bool pending_space = false;
  for (std::size_t i = b; i < e; ++i) {
    if (unicode::is_space(s[i])) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(unicode::to_lower(s[i]));
  }
  return unicode::encode(out);
}

inline double token_iou(const TokenRange& a, const TokenRange& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  const std::size_t inter = hi > lo ? hi - lo : 0;
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

/// Tokens touched by [char_start, char_end), including partially covered
/// ones. Empty optional when no token overlaps the range.
inline std::optional<TokenRange> token_range(const std::vector<Token>& doc_tokens,
                                             std::size_t char_start, std::size_t char_end) {
  auto first = std::partition_point(doc_tokens.begin(), doc_tokens.end(),
                                    [&](const Token& t) { return t.char_end <= char_start; });
  auto last = std::partition_point(first, doc_tokens.end(),
                                   [&](const Token& t) { return t.char_start < char_end; });
  if (first == last) return std::nullopt;
  return TokenRange{static_cast<std::size_t>(first - doc_tokens.begin()),
                    static_cast<std::size_t>(last - doc_tokens.begin())};
}

/// Tokenized documents of a corpus, indexed like corpus.documents().
class DocumentTokens {
 public:
  explicit DocumentTokens(const Corpus& corpus) {
    tokens_.reserve(corpus.documents().size());
    for (const auto& d : corpus.documents()) tokens_.push_back(tokenize(d.text));
  }
  const std::vector<Token>& operator[](std::size_t doc_index) const { return tokens_[doc_index]; }

 private:
  std::vector<std::vector<Token>> tokens_;
};

/// One outcome per gold span, sorted by span_id. Matching is existential:
/// a prediction may satisfy any number of gold spans.
inline std::vector<MatchOutcome> evaluate_matches(const Corpus& corpus, const MatchCriterion& criterion,
                                                  const DocumentTokens& doc_tokens) {
  struct Candidate {
    DecisionCategory category;
    std::string normalized;
    std::optional<TokenRange> range;
  };
  std::unordered_map<std::string, std::vector<Candidate>> by_doc;
  for (const auto& p : corpus.predicted()) {
    const auto& tokens = doc_tokens[corpus.document_index(p.doc_id)];
    by_doc[p.doc_id].push_back(
        {p.category, normalize_span_text(p.text), token_range(tokens, p.char_start, p.char_end)});
  }

  std::vector<MatchOutcome> out;
  out.reserve(corpus.gold().size());
  for (const auto& g : corpus.gold()) {
    MatchOutcome o;
    o.span_id = g.span_id;
    o.doc_id = g.doc_id;
    o.category = g.category;
    o.criterion = criterion;
    const auto& tokens = doc_tokens[corpus.document_index(g.doc_id)];
    const auto gold_range = token_range(tokens, g.char_start, g.char_end);
    o.no_token_coverage = !gold_range.has_value();
    auto cands = by_doc.find(g.doc_id);
    if (cands != by_doc.end()) {
      if (criterion.kind == MatchKind::Exact) {
        const std::string norm = normalize_span_text(g.text);
        for (const auto& c : cands->second) {
          if (c.category == g.category && c.normalized == norm) {
            o.is_matched = 1;
            break;
          }
        }
      } else if (gold_range) {
        for (const auto& c : cands->second) {
          if (c.category != g.category || !c.range) continue;
          o.best_iou = std::max(o.best_iou, token_iou(*gold_range, *c.range));
        }
        o.is_matched = o.best_iou >= criterion.iou_threshold ? 1 : 0;
      }
    }
    if (o.no_token_coverage) o.is_matched = 0;
    out.push_back(std::move(o));
  }
  std::sort(out.begin(), out.end(),
            [](const MatchOutcome& a, const MatchOutcome& b) { return a.span_id < b.span_id; });
  return out;
}

inline std::vector<MatchOutcome> evaluate_matches(const Corpus& corpus, const MatchCriterion& criterion) {
  return evaluate_matches(corpus, criterion, DocumentTokens(corpus));
}

/// Mean of is_matched; 0 for an empty list.
inline double recall(const std::vector<MatchOutcome>& outcomes) {
  if (outcomes.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& o : outcomes) hits += static_cast<std::size_t>(o.is_matched);
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

}  // namespace spanrel
