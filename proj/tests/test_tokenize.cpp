#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "spanrel/rng.hpp"
#include "spanrel/tokenize.hpp"

using namespace spanrel;

namespace {

std::vector<std::string> surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(t.surface);
  return out;
}

std::size_t words(std::string_view text) {
  std::size_t n = 0;
  for (const auto& t : tokenize(text)) n += t.is_word ? 1 : 0;
  return n;
}

// Alphabet mixing ASCII, accented and CJK letters, digits, marks, clitic
// apostrophes, punctuation and several kinds of whitespace.
const std::u32string kAlphabet =
    U"abcXYZ019 \t\n  .,;:-'’!?()\"/éß中́٣";

}  // namespace

TEST(Tokenize, WhitespaceAndPunctuation) {
  EXPECT_EQ(surfaces("chest pain."), (std::vector<std::string>{"chest", "pain", "."}));
  const auto t = tokenize(std::string_view("chest pain."));
  EXPECT_TRUE(t[0].is_word);
  EXPECT_TRUE(t[1].is_word);
  EXPECT_FALSE(t[2].is_word);
}

TEST(Tokenize, Clitics) {
  EXPECT_EQ(surfaces("don't"), (std::vector<std::string>{"do", "n't"}));
  EXPECT_EQ(surfaces("patient's"), (std::vector<std::string>{"patient", "'s"}));
  EXPECT_EQ(surfaces("we'll they've I'm"), (std::vector<std::string>{"we", "'ll", "they", "'ve", "I", "'m"}));
  EXPECT_EQ(surfaces("can’t"), (std::vector<std::string>{"ca", "n’t"}));
  EXPECT_EQ(tokenize(std::string_view("DON'T"))[1].folded, "n't");
}

TEST(Tokenize, AdviceSentenceHasTenWordsAndOneComma) {
  const auto toks = tokenize(std::string_view("If you experience chest pain, you should call your doctor"));
  std::size_t w = 0, punct = 0;
  for (const auto& t : toks) (t.is_word ? w : punct) += 1;
  EXPECT_EQ(w, 10u);
  EXPECT_EQ(punct, 1u);
  EXPECT_EQ(toks[5].surface, ",");
}

TEST(Tokenize, InternalJoiners) {
  EXPECT_EQ(surfaces("follow-up"), (std::vector<std::string>{"follow-up"}));
  EXPECT_EQ(surfaces("q.d. 1,000 mg"), (std::vector<std::string>{"q.d", ".", "1,000", "mg"}));
  EXPECT_EQ(surfaces("pain, fever"), (std::vector<std::string>{"pain", ",", "fever"}));
  EXPECT_EQ(surfaces("(see above)"), (std::vector<std::string>{"(", "see", "above", ")"}));
}

TEST(Tokenize, NumbersAreNotWords) {
  EXPECT_EQ(words("25 mg"), 1u);
  EXPECT_EQ(words("2"), 0u);
  EXPECT_EQ(words("B12"), 1u);
}

TEST(Tokenize, DocTokenIndexIsPosition) {
  const auto toks = tokenize(std::string_view("a b, c."));
  for (std::size_t i = 0; i < toks.size(); ++i) EXPECT_EQ(toks[i].doc_token_index, i);
}

TEST(Tokenize, ReconstructionOnRandomStrings) {
  Rng rng(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    std::u32string text;
    const auto len = rng.below(40);
    for (std::uint64_t i = 0; i < len; ++i) text.push_back(kAlphabet[rng.below(kAlphabet.size())]);
    const auto toks = tokenize(std::u32string_view(text));
    std::u32string rebuilt;
    std::size_t pos = 0;
    for (const auto& t : toks) {
      ASSERT_GE(t.char_start, pos);
      ASSERT_LT(t.char_start, t.char_end);
      for (std::size_t p = pos; p < t.char_start; ++p) {
        ASSERT_TRUE(unicode::is_space(text[p])) << "non-space gap in trial " << trial;
      }
      rebuilt += text.substr(pos, t.char_start - pos);
      const auto piece = text.substr(t.char_start, t.char_end - t.char_start);
      ASSERT_EQ(unicode::encode(piece), t.surface);
      bool alpha = false;
      for (char32_t c : piece) alpha = alpha || unicode::is_alphabetic(c);
      ASSERT_EQ(t.is_word, alpha);
      rebuilt += piece;
      pos = t.char_end;
    }
    rebuilt += text.substr(pos);
    ASSERT_EQ(rebuilt, text);
  }
}

TEST(Sentences, Examples) {
  EXPECT_EQ(split_sentences("Continue aspirin daily"), 1u);
  EXPECT_EQ(split_sentences("Call your doctor. Rest today."), 2u);
  EXPECT_EQ(split_sentences("hold coumadin\nrestart friday"), 2u);
}

TEST(Sentences, EdgeCases) {
  EXPECT_EQ(split_sentences(""), 0u);
  EXPECT_EQ(split_sentences("..."), 0u);
  EXPECT_EQ(split_sentences("Temp 38.5 today."), 1u);
  EXPECT_EQ(split_sentences("Stop!Now"), 1u);  // no whitespace after '!'
  EXPECT_EQ(split_sentences("Pain? Yes. \n\n Fever!"), 3u);
  EXPECT_EQ(split_sentences("a. . . b"), 2u);  // wordless fragments do not count
}

// Independent count: a boundary follows any terminator character that is
// followed by whitespace (the alphabet has no joiners), or any newline; only
// segments holding a letter count.
TEST(Sentences, OracleOnRandomStrings) {
  const std::u32string alphabet = U"ab .!?\n,";
  Rng rng(99);
  for (int trial = 0; trial < 3000; ++trial) {
    std::u32string text;
    const auto len = rng.below(30);
    for (std::uint64_t i = 0; i < len; ++i) text.push_back(alphabet[rng.below(alphabet.size())]);
    std::size_t expected = 0;
    bool has_letter = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char32_t c = text[i];
      if (c == U'a' || c == U'b') has_letter = true;
      const bool lone_terminator = (c == U'.' || c == U'!' || c == U'?') && i + 1 < text.size() &&
                                   (text[i + 1] == U' ' || text[i + 1] == U'\n');
      if ((lone_terminator || c == U'\n') && has_letter) {
        ++expected;
        has_letter = false;
      }
    }
    if (has_letter) ++expected;
    ASSERT_EQ(count_sentences(text, tokenize(std::u32string_view(text))), expected)
        << unicode::encode(text);
  }
}

TEST(Syllables, Examples) {
  EXPECT_EQ(count_syllables("pain"), 1u);
  EXPECT_EQ(count_syllables("denies"), 2u);
  EXPECT_EQ(count_syllables("a"), 1u);
  EXPECT_EQ(count_syllables("patient"), 2u);
  EXPECT_EQ(count_syllables("table"), 2u);
  EXPECT_EQ(count_syllables("take"), 1u);
  EXPECT_EQ(count_syllables("agree"), 2u);
  EXPECT_EQ(count_syllables("the"), 1u);
  EXPECT_EQ(count_syllables("mg"), 1u);
  EXPECT_EQ(count_syllables("Metoprolol"), 4u);
  EXPECT_EQ(count_syllables("follow-up"), 3u);
}

TEST(Syllables, NonWordIsAnError) {
  EXPECT_THROW(count_syllables("42"), ComputationError);
  EXPECT_THROW(count_syllables("."), ComputationError);
}
