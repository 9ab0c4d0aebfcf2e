#pragma once

// Synthetic corpora with known per-category style profiles, and a simulated
// extractor with controllable misses, boundary jitter and category confusion.
//
// Word pools are fixed and chosen so every index is predictable: stopword and
// pronoun pools sit inside the stopword lexicon and outside both cue lists;
// filler, entity and cue pools sit outside the stopword lexicon.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanrel/category.hpp"
#include "spanrel/corpus.hpp"
#include "spanrel/indices.hpp"
#include "spanrel/lexicon.hpp"
#include "spanrel/rng.hpp"
#include "spanrel/tokenize.hpp"

namespace spanrel::synth {

namespace pools {

inline const std::vector<std::string>& stopwords() {
  static const std::vector<std::string> words{
      "the",  "of",    "and",   "to",    "with",  "for",   "on",   "at",    "by",   "from",
      "this", "that",  "was",   "were",  "be",    "been",  "has",  "have",  "had",  "in",
      "into", "as",    "than",  "then",  "there", "these", "those", "also", "very", "again",
      "once", "each",  "both",  "some",  "such",  "other", "more", "most",  "only", "same",
      "so",   "too",   "well",  "will",  "would", "must",  "can",  "per",   "via",  "until"};
  return words;
}

inline const std::vector<std::string>& pronouns() {
  static const std::vector<std::string> words{"you", "we",   "they", "he",  "she", "it",
                                              "your", "his", "their", "our", "them", "him",
                                              "us",  "her",  "my",   "me"};
  return words;
}

inline const std::vector<std::string>& fillers() {
  static const std::vector<std::string> words{
      "hold",  "dose",  "start", "check", "pain",  "rest",  "blood", "test",  "scan",
      "drink", "walk",  "sleep", "diet",  "wound", "clean", "daily", "fluids", "stool",
      "heart", "rate",  "chest", "cough", "fever", "pills", "food",  "water", "labs",
      "skin",  "knee",  "bed",   "meals", "tablet", "clinic", "visit", "weight", "sugar"};
  return words;
}

inline const std::vector<std::string>& entities() {
  static const std::vector<std::string> words{
      "Zoloxamine", "Cardiprel",  "Heparexin", "Lisomytin", "Benavirol", "Toradamol",
      "Metrovane",  "Cefrazolin", "Dilantrex", "Furosomide", "Warfarol", "Ambitrazine",
      "Keflorin",   "Protonavir", "Lovenorin", "Zosylate"};
  return words;
}

inline const std::vector<std::string>& hedges() {
  static const std::vector<std::string> words{"possible", "likely",    "probable",  "suspected",
                                              "questionable", "pending", "consider", "potential",
                                              "uncertain", "unclear",   "presumed",  "equivocal"};
  return words;
}

inline const std::vector<std::string>& negations() {
  static const std::vector<std::string> words{"denies", "denied",       "negative", "absent",
                                              "unremarkable", "lacking", "unable",  "lacks"};
  return words;
}

}  // namespace pools

struct CategoryProfile {
  DecisionCategory category{};
  std::size_t min_words = 4;
  std::size_t max_words = 12;
  double stopword_rate = 0.0;
  double proper_noun_rate = 0.0;
  double pronoun_rate = 0.0;
  double hedge_probability = 0.0;
  double negation_probability = 0.0;
  double weight = 1.0;  // relative share of generated spans
  std::vector<std::string> entity_pool = pools::entities();
  std::vector<std::string> filler_pool = pools::fillers();

  void validate() const {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!unit(stopword_rate) || !unit(proper_noun_rate) || !unit(pronoun_rate) ||
        !unit(hedge_probability) || !unit(negation_probability)) {
      throw std::invalid_argument("profile rates must lie in [0, 1]");
    }
    if (stopword_rate + proper_noun_rate + pronoun_rate > 1.0 + 1e-12) {
      throw std::invalid_argument("profile rates sum above 1 for " +
                                  std::string(category_label(category)));
    }
    if (min_words < 1 || max_words < min_words) throw std::invalid_argument("bad span length range");
    if (!(weight > 0.0)) throw std::invalid_argument("profile weight must be positive");
    if (entity_pool.empty() || filler_pool.empty()) throw std::invalid_argument("empty word pool");
  }
};

struct ExtractorSim {
  double base_miss = 0.0;
  double stopword_slope = 0.0;       // added miss probability per unit prop_stopwords
  double jitter_probability = 0.0;   // per boundary
  std::size_t max_jitter = 0;        // tokens; shifts are uniform in [-max, max] \ {0}
  double confusion_probability = 0.0;
  double document_miss_spread = 0.0; // per-document shift, uniform in [-s, s]

  void validate() const {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!unit(base_miss) || !unit(jitter_probability) || !unit(confusion_probability)) {
      throw std::invalid_argument("extractor probabilities must lie in [0, 1]");
    }
    if (jitter_probability > 0.0 && max_jitter == 0) {
      throw std::invalid_argument("jitter_probability > 0 needs max_jitter >= 1");
    }
    if (document_miss_spread < 0.0) throw std::invalid_argument("document_miss_spread must be >= 0");
  }

  double miss_probability(double prop_stopwords, double document_shift = 0.0) const {
    return std::clamp(base_miss + stopword_slope * prop_stopwords + document_shift, 0.0, 1.0);
  }
};

struct CorpusShape {
  std::size_t n_docs = 50;
  std::size_t min_spans_per_doc = 5;
  std::size_t max_spans_per_doc = 15;
};

namespace detail {

enum class Slot { Stopword, Entity, Pronoun, Filler };

template <class T>
const T& pick(Rng& rng, const std::vector<T>& pool) {
  return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

inline std::vector<std::string> make_span(const CategoryProfile& p, Rng& rng) {
  const auto n = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(p.min_words), static_cast<std::int64_t>(p.max_words)));
  std::vector<Slot> slots(n);
  for (auto& s : slots) {
    const double u = rng.uniform();
    if (u < p.stopword_rate) {
      s = Slot::Stopword;
    } else if (u < p.stopword_rate + p.proper_noun_rate) {
      s = Slot::Entity;
    } else if (u < p.stopword_rate + p.proper_noun_rate + p.pronoun_rate) {
      s = Slot::Pronoun;
    } else {
      s = Slot::Filler;
    }
  }
  // A sentence-initial capitalized word never counts as a proper noun, so
  // keep entities out of position 0 when another slot can take it.
  if (slots[0] == Slot::Entity) {
    auto other = std::find_if(slots.begin(), slots.end(), [](Slot s) { return s != Slot::Entity; });
    if (other != slots.end()) std::iter_swap(slots.begin(), other);
  }

  std::vector<std::string> words(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (slots[i]) {
      case Slot::Stopword: words[i] = pick(rng, pools::stopwords()); break;
      case Slot::Entity: words[i] = pick(rng, p.entity_pool); break;
      case Slot::Pronoun: words[i] = pick(rng, pools::pronouns()); break;
      case Slot::Filler: words[i] = pick(rng, p.filler_pool); break;
    }
  }
  // Cue words take over a filler slot, or are appended when none is left.
  auto place_cue = [&](const std::string& cue) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (slots[i] == Slot::Filler) free.push_back(i);
    }
    if (free.empty()) {
      words.push_back(cue);
      return;
    }
    const std::size_t at = pick(rng, free);
    words[at] = cue;
    slots[at] = Slot::Stopword;  // no longer available
  };
  if (rng.bernoulli(p.hedge_probability)) place_cue(pick(rng, pools::hedges()));
  if (rng.bernoulli(p.negation_probability)) place_cue(pick(rng, pools::negations()));
  return words;
}

inline std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

}  // namespace detail

/// Gold-only corpus. Each span is one sentence of its document; span texts
/// are distinct within a document. Deterministic in `seed` (document d uses
/// stream d).
inline Corpus generate_corpus(const std::vector<CategoryProfile>& profiles, const CorpusShape& shape,
                              std::uint64_t seed) {
  if (profiles.empty()) throw std::invalid_argument("at least one profile required");
  if (shape.n_docs < 1) throw std::invalid_argument("n_docs must be >= 1");
  if (shape.min_spans_per_doc < 1 || shape.max_spans_per_doc < shape.min_spans_per_doc) {
    throw std::invalid_argument("bad spans-per-document range");
  }
  double total_weight = 0.0;
  for (const auto& p : profiles) {
    p.validate();
    total_weight += p.weight;
  }

  std::vector<Document> docs;
  std::vector<GoldSpan> gold;
  for (std::size_t d = 0; d < shape.n_docs; ++d) {
    Rng rng(seed, d);
    Document doc;
    doc.doc_id = "doc" + std::to_string(d);
    doc.meta = {{"split", "val"}, {"source", "synthetic"}};
    const auto spans = static_cast<std::size_t>(rng.between(
        static_cast<std::int64_t>(shape.min_spans_per_doc), static_cast<std::int64_t>(shape.max_spans_per_doc)));
    std::set<std::string> used;
    std::size_t offset = 0;  // in code points; all pool words are ASCII
    for (std::size_t k = 0; k < spans; ++k) {
      double u = rng.uniform() * total_weight;
      const CategoryProfile* profile = &profiles.back();
      for (const auto& p : profiles) {
        if (u < p.weight) {
          profile = &p;
          break;
        }
        u -= p.weight;
      }
      std::string text;
      for (int attempt = 0; attempt < 100; ++attempt) {
        text = detail::join(detail::make_span(*profile, rng));
        if (used.insert(text).second) break;
        text.clear();
      }
      if (text.empty()) continue;  // pools exhausted for this document
      if (!doc.text.empty()) {
        doc.text += " ";
        offset += 1;
      }
      GoldSpan g;
      g.span_id = doc.doc_id + ":" + std::to_string(gold.size());
      g.doc_id = doc.doc_id;
      g.category = profile->category;
      g.char_start = offset;
      g.char_end = offset + text.size();
      g.text = text;
      doc.text += text + ".";
      offset += text.size() + 1;
      gold.push_back(std::move(g));
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), std::move(gold), {});
}

/// Simulated extractor output for the gold spans of `corpus`. Gold span i
/// draws from stream i of `seed`; document shifts from a separate stream.
inline std::vector<PredictedSpan> simulate_predictions(const Corpus& corpus, const ExtractorSim& sim,
                                                       std::uint64_t seed,
                                                       const LexiconBundle& lexicons = LexiconBundle::builtin()) {
  sim.validate();
  const std::uint64_t doc_seed = derive_seed(seed, 0xd0c5ULL);
  std::vector<double> doc_shift(corpus.documents().size(), 0.0);
  std::vector<std::vector<Token>> doc_tokens(corpus.documents().size());
  std::vector<std::u32string> doc_text(corpus.documents().size());
  for (std::size_t d = 0; d < corpus.documents().size(); ++d) {
    Rng rng(doc_seed, d);
    doc_shift[d] = (2.0 * rng.uniform() - 1.0) * sim.document_miss_spread;
    doc_text[d] = unicode::decode(corpus.documents()[d].text);
    doc_tokens[d] = tokenize(doc_text[d]);
  }

  std::vector<PredictedSpan> out;
  for (std::size_t i = 0; i < corpus.gold().size(); ++i) {
    const GoldSpan& g = corpus.gold()[i];
    Rng rng(seed, i);
    const std::size_t d = corpus.document_index(g.doc_id);
    const double stop = compute_index_vector(g.text, lexicons).prop_stopwords;
    if (rng.bernoulli(sim.miss_probability(stop, doc_shift[d]))) continue;

    const auto& tokens = doc_tokens[d];
    auto first = std::partition_point(tokens.begin(), tokens.end(),
                                      [&](const Token& t) { return t.char_end <= g.char_start; });
    auto last = std::partition_point(first, tokens.end(),
                                     [&](const Token& t) { return t.char_start < g.char_end; });
    if (first == last) continue;
    auto start = static_cast<std::int64_t>(first - tokens.begin());
    auto end = static_cast<std::int64_t>(last - tokens.begin());
    auto shift = [&]() -> std::int64_t {
      if (!rng.bernoulli(sim.jitter_probability)) return 0;
      const auto j = static_cast<std::int64_t>(sim.max_jitter);
      std::int64_t s = rng.between(-j, j - 1);
      return s >= 0 ? s + 1 : s;  // skip zero
    };
    const auto ntok = static_cast<std::int64_t>(tokens.size());
    start = std::clamp<std::int64_t>(start + shift(), 0, ntok - 1);
    end = std::clamp<std::int64_t>(end + shift(), start + 1, ntok);

    PredictedSpan p;
    p.doc_id = g.doc_id;
    p.category = g.category;
    if (rng.bernoulli(sim.confusion_probability)) {
      const auto k = static_cast<std::size_t>(rng.below(kCategoryCount - 1));
      const std::size_t own = category_index(g.category);
      p.category = kAllCategories[k >= own ? k + 1 : k];
    }
    p.char_start = tokens[static_cast<std::size_t>(start)].char_start;
    p.char_end = tokens[static_cast<std::size_t>(end - 1)].char_end;
    p.text = unicode::substr(doc_text[d], p.char_start, p.char_end);
    out.push_back(std::move(p));
  }
  return out;
}

/// Nine profiles with an entity-dense/telegraphic versus narrative contrast:
/// drug-related and defining-problem spans are short and name-heavy; advice,
/// contact and goal spans carry more stopwords, pronouns and cues.
inline std::vector<CategoryProfile> default_profiles() {
  using C = DecisionCategory;
  auto make = [](C c, std::size_t lo, std::size_t hi, double stop, double proper, double pron,
                 double hedge, double neg, double weight) {
    CategoryProfile p;
    p.category = c;
    p.min_words = lo;
    p.max_words = hi;
    p.stopword_rate = stop;
    p.proper_noun_rate = proper;
    p.pronoun_rate = pron;
    p.hedge_probability = hedge;
    p.negation_probability = neg;
    p.weight = weight;
    return p;
  };
  return {
      make(C::DefiningProblem, 3, 10, 0.10, 0.30, 0.00, 0.05, 0.10, 21.9),
      make(C::EvaluatingTestResult, 4, 12, 0.20, 0.15, 0.00, 0.05, 0.15, 7.3),
      make(C::DrugRelated, 2, 8, 0.05, 0.45, 0.00, 0.02, 0.05, 14.2),
      make(C::TherapeuticProcedureRelated, 4, 12, 0.20, 0.20, 0.02, 0.05, 0.05, 6.6),
      make(C::GatheringInformation, 4, 12, 0.25, 0.10, 0.05, 0.20, 0.05, 0.4),
      make(C::AdviceAndPrecaution, 8, 20, 0.40, 0.03, 0.15, 0.40, 0.30, 1.7),
      make(C::ContactRelated, 6, 16, 0.35, 0.05, 0.10, 0.10, 0.05, 2.5),
      make(C::TreatmentGoal, 5, 14, 0.30, 0.05, 0.05, 0.15, 0.05, 0.4),
      make(C::Deferment, 4, 10, 0.30, 0.05, 0.05, 0.20, 0.05, 0.1),
  };
}

}  // namespace spanrel::synth
