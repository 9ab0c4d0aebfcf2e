#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "spanrel/matching.hpp"
#include "spanrel/synth.hpp"

using namespace spanrel;
using namespace spanrel::synth;

namespace {

const LexiconBundle& lex() {
  static const LexiconBundle b = LexiconBundle::builtin();
  return b;
}

CategoryProfile profile(DecisionCategory c, double stop, double proper, double pron) {
  CategoryProfile p;
  p.category = c;
  p.stopword_rate = stop;
  p.proper_noun_rate = proper;
  p.pronoun_rate = pron;
  return p;
}

Corpus with_predictions(const Corpus& gold_only, const ExtractorSim& sim, std::uint64_t seed) {
  return Corpus(gold_only.documents(), gold_only.gold(), simulate_predictions(gold_only, sim, seed));
}

double mean_of(const Corpus& c, double IndexVector::*field) {
  double s = 0.0;
  for (const auto& g : c.gold()) s += compute_index_vector(g.text, lex()).*field;
  return s / static_cast<double>(c.gold().size());
}

}  // namespace

TEST(Synth, DeterministicInSeed) {
  const auto a = generate_corpus(default_profiles(), {20, 3, 8}, 5);
  const auto b = generate_corpus(default_profiles(), {20, 3, 8}, 5);
  const auto c = generate_corpus(default_profiles(), {20, 3, 8}, 6);
  EXPECT_EQ(a.documents(), b.documents());
  EXPECT_EQ(a.gold(), b.gold());
  EXPECT_NE(a.documents(), c.documents());
  ExtractorSim sim{0.2, 0.5, 0.3, 2, 0.1, 0.1};
  EXPECT_EQ(simulate_predictions(a, sim, 9), simulate_predictions(b, sim, 9));
}

TEST(Synth, SpanTextsAreDistinctWithinADocument) {
  const auto c = generate_corpus(default_profiles(), {30, 5, 15}, 1);
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& g : c.gold()) EXPECT_TRUE(seen[g.doc_id].insert(g.text).second) << g.text;
}

TEST(Synth, RatesConverge) {
  // An all-entity span keeps its first word sentence-initial, so the
  // measured proper-noun share is rate - E[rate^n / n] over span lengths n.
  auto dense = profile(DecisionCategory::DrugRelated, 0.0, 0.9, 0.0);
  dense.min_words = 10;
  dense.max_words = 20;
  double expected = 0.0;
  for (int n = 10; n <= 20; ++n) expected += (0.9 - std::pow(0.9, n) / n) / 11.0;
  const auto c = generate_corpus({dense}, {1000, 10, 10}, 2);
  ASSERT_EQ(c.gold().size(), 10000u);
  EXPECT_NEAR(mean_of(c, &IndexVector::prop_proper_nouns), 0.9, 0.05);
  EXPECT_NEAR(mean_of(c, &IndexVector::prop_proper_nouns), expected, 0.01);
  EXPECT_EQ(mean_of(c, &IndexVector::prop_stopwords), 0.0);

  const std::vector<CategoryProfile> mixed{profile(DecisionCategory::AdviceAndPrecaution, 0.3, 0.2, 0.1)};
  const auto m = generate_corpus(mixed, {1000, 10, 10}, 3);
  // Pronoun pool words are also stopwords.
  EXPECT_NEAR(mean_of(m, &IndexVector::prop_stopwords), 0.4, 0.05);
  EXPECT_NEAR(mean_of(m, &IndexVector::prop_pronouns), 0.1, 0.05);
  EXPECT_NEAR(mean_of(m, &IndexVector::prop_proper_nouns), 0.2, 0.05);
}

TEST(Synth, CertainCuesAlwaysPresent) {
  auto p = profile(DecisionCategory::Deferment, 0.2, 0.2, 0.1);
  p.hedge_probability = 1.0;
  p.negation_probability = 1.0;
  const auto c = generate_corpus({p}, {100, 5, 5}, 4);
  for (const auto& g : c.gold()) {
    const auto v = compute_index_vector(g.text, lex());
    ASSERT_EQ(v.hedge_present, 1) << g.text;
    ASSERT_EQ(v.negation_present, 1) << g.text;
  }
  p.hedge_probability = 0.0;
  p.negation_probability = 0.0;
  const auto plain = generate_corpus({p}, {100, 5, 5}, 4);
  for (const auto& g : plain.gold()) {
    const auto v = compute_index_vector(g.text, lex());
    ASSERT_EQ(v.hedge_present + v.negation_present, 0) << g.text;
  }
}

TEST(Synth, CategoryProfilesDiffer) {
  const auto c = generate_corpus(default_profiles(), {400, 8, 12}, 8);
  std::map<DecisionCategory, std::vector<double>> sum;
  std::map<DecisionCategory, double> n;
  for (const auto& g : c.gold()) {
    const auto v = compute_index_vector(g.text, lex());
    auto& s = sum[g.category];
    s.resize(4);
    s[0] += v.prop_stopwords;
    s[1] += v.prop_pronouns;
    s[2] += v.prop_proper_nouns;
    s[3] += v.hedge_present;
    n[g.category] += 1;
  }
  const auto& advice = sum[DecisionCategory::AdviceAndPrecaution];
  const auto& drug = sum[DecisionCategory::DrugRelated];
  const double na = n[DecisionCategory::AdviceAndPrecaution], nd = n[DecisionCategory::DrugRelated];
  EXPECT_GT(advice[0] / na, drug[0] / nd);
  EXPECT_GT(advice[1] / na, drug[1] / nd);
  EXPECT_LT(advice[2] / na, drug[2] / nd);
  EXPECT_GT(advice[3] / na, drug[3] / nd);
}

TEST(Synth, IdentityExtractorRecallsEverything) {
  const auto c = with_predictions(generate_corpus(default_profiles(), {50, 5, 10}, 1), {}, 2);
  EXPECT_EQ(c.predicted().size(), c.gold().size());
  EXPECT_EQ(recall(evaluate_matches(c, MatchCriterion::exact())), 1.0);
  EXPECT_EQ(recall(evaluate_matches(c, MatchCriterion::iou())), 1.0);
}

TEST(Synth, JitterSeparatesExactFromRelaxed) {
  ExtractorSim sim;
  sim.base_miss = 0.2;
  sim.jitter_probability = 0.5;
  sim.max_jitter = 2;
  const auto c = with_predictions(generate_corpus(default_profiles(), {300, 5, 10}, 3), sim, 4);
  const double ex = recall(evaluate_matches(c, MatchCriterion::exact()));
  const double io = recall(evaluate_matches(c, MatchCriterion::iou()));
  EXPECT_LT(ex, io);
  EXPECT_LT(io, 0.8 + 0.03);
  EXPECT_GT(io, 0.8 - 0.1);
}

TEST(Synth, NoJitterNoConfusionCriteriaAgree) {
  ExtractorSim sim;
  sim.base_miss = 0.3;
  sim.stopword_slope = 0.6;
  const auto c = with_predictions(generate_corpus(default_profiles(), {100, 5, 10}, 5), sim, 6);
  const auto ex = evaluate_matches(c, MatchCriterion::exact());
  const auto io = evaluate_matches(c, MatchCriterion::iou());
  for (std::size_t i = 0; i < ex.size(); ++i) ASSERT_EQ(ex[i].is_matched, io[i].is_matched);
}

TEST(Synth, FullConfusionMatchesNothing) {
  ExtractorSim sim;
  sim.confusion_probability = 1.0;
  const auto c = with_predictions(generate_corpus(default_profiles(), {30, 5, 10}, 7), sim, 8);
  EXPECT_EQ(recall(evaluate_matches(c, MatchCriterion::iou())), 0.0);
}

TEST(Synth, MissRateFollowsStopwordSlope) {
  ExtractorSim sim;
  sim.base_miss = 0.1;
  sim.stopword_slope = 0.8;
  const auto c = with_predictions(generate_corpus(default_profiles(), {400, 8, 12}, 9), sim, 10);
  const auto out = evaluate_matches(c, MatchCriterion::exact());
  std::map<std::string, std::string> text;
  for (const auto& g : c.gold()) text[g.span_id] = g.text;
  double hit_lo = 0, n_lo = 0, hit_hi = 0, n_hi = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double s = compute_index_vector(text[out[i].span_id], lex()).prop_stopwords;
    (s < 0.2 ? hit_lo : hit_hi) += out[i].is_matched;
    (s < 0.2 ? n_lo : n_hi) += 1;
  }
  EXPECT_GT(hit_lo / n_lo, hit_hi / n_hi + 0.1);
}

TEST(Synth, RoundTripsThroughJsonl) {
  const auto g = generate_corpus(default_profiles(), {10, 3, 6}, 11);
  const auto pred = simulate_predictions(g, {0.2, 0.3, 0.4, 2, 0.1, 0.0}, 12);
  std::ostringstream d, s, p;
  write_documents(d, g.documents());
  write_gold_spans(s, g.gold());
  write_predicted_spans(p, pred);
  std::istringstream di(d.str()), si(s.str()), pi(p.str());
  const auto docs = read_documents(di);
  EXPECT_EQ(docs, g.documents());
  EXPECT_EQ(read_gold_spans(si, docs), g.gold());
  EXPECT_EQ(read_predicted_spans(pi, docs), pred);
}

TEST(Synth, InvalidParametersRejected) {
  auto p = profile(DecisionCategory::Deferment, 0.6, 0.6, 0.0);
  EXPECT_THROW(generate_corpus({p}, {}, 1), std::invalid_argument);
  EXPECT_THROW(generate_corpus({}, {}, 1), std::invalid_argument);
  ExtractorSim sim;
  sim.jitter_probability = 0.5;
  EXPECT_THROW(sim.validate(), std::invalid_argument);
  sim.max_jitter = 1;
  sim.base_miss = 1.5;
  EXPECT_THROW(sim.validate(), std::invalid_argument);
}
