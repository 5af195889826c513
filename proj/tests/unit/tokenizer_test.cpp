// Copyright 2026 The Driftscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "driftscope/corpus.hpp"
#include "synthetic.hpp"

namespace {

using driftscope::Sentence;
using driftscope::tokenize_sentences;

TEST(Tokenizer, TwoPlainSentences) {
  EXPECT_EQ(tokenize_sentences("A b. C d."), (std::vector<Sentence>{{"a", "b"}, {"c", "d"}}));
}

TEST(Tokenizer, EmptyText) { EXPECT_TRUE(tokenize_sentences("").empty()); }

TEST(Tokenizer, DigitsDroppedHyphenKept) {
  EXPECT_EQ(tokenize_sentences("state-of-the-art 42 models."),
            (std::vector<Sentence>{{"state-of-the-art", "models"}}));
}

TEST(Tokenizer, BoundaryNeedsWhitespaceOrEnd) {
  EXPECT_EQ(tokenize_sentences("e.g. this! Then? ok"),
            (std::vector<Sentence>{{"e", "g"}, {"this"}, {"then"}, {"ok"}}));
  EXPECT_EQ(tokenize_sentences("version 3.5 works."), (std::vector<Sentence>{{"version", "works"}}));
}

TEST(Tokenizer, EdgeHyphensAndPunctuation) {
  EXPECT_EQ(tokenize_sentences("-pre post- a--b x-y-z (UPPER), it's."),
            (std::vector<Sentence>{{"pre", "post", "a", "b", "x-y-z", "upper", "it", "s"}}));
}

TEST(Tokenizer, PunctuationOnlySentencesAreDropped) {
  EXPECT_EQ(tokenize_sentences("... 123. !? Word."), (std::vector<Sentence>{{"word"}}));
}

TEST(Tokenizer, NonAsciiBytesSeparateTokens) {
  EXPECT_EQ(tokenize_sentences("caf\xc3\xa9 na\xc3\xafve."),
            (std::vector<Sentence>{{"caf", "na", "ve"}}));
}

TEST(Tokenizer, Deterministic) {
  driftscope::testing::PlantedDriftSpec spec;
  spec.docs_per_frame = 5;
  const auto corpus = driftscope::testing::make_planted_drift(spec);
  for (const auto& [year, text] : corpus.records) {
    EXPECT_EQ(tokenize_sentences(text), tokenize_sentences(text));
  }
}

TEST(Tokenizer, TokensAreNonEmptyLowercase) {
  driftscope::testing::Rng rng(3);
  const std::string alphabet = "aZ-9. !?\t\n,'x";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const std::size_t len = rng.below(60);
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng.below(alphabet.size())];
    for (const auto& sentence : tokenize_sentences(text)) {
      EXPECT_FALSE(sentence.empty());
      for (const auto& token : sentence) {
        ASSERT_FALSE(token.empty());
        EXPECT_NE(token.front(), '-');
        EXPECT_NE(token.back(), '-');
        for (char c : token) EXPECT_TRUE((c >= 'a' && c <= 'z') || c == '-') << text;
      }
    }
  }
}

}  // namespace
