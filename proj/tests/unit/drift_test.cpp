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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "driftscope/corpus.hpp"
#include "driftscope/drift.hpp"
#include "driftscope/embedding_store.hpp"
#include "driftscope/error.hpp"
#include "synthetic.hpp"

namespace {

using namespace driftscope;
namespace dt = driftscope::testing;

using Vec = std::vector<double>;

// Vocabulary over `words` present in both frames; frequencies are irrelevant
// to the drift functions.
Vocabulary vocab_of(const std::vector<std::string>& words, std::size_t frames = 2) {
  std::map<std::string, VocabularyEntry> entries;
  for (const auto& w : words) {
    VocabularyEntry e;
    e.per_frame_frequency.assign(frames, 100);
    e.total_frequency = 100 * frames;
    e.frame_presence_count = frames;
    entries.emplace(w, e);
  }
  return Vocabulary(frames, std::move(entries));
}

EmbeddingStore store_of(std::size_t dim, const std::vector<std::tuple<std::string, std::size_t, Vec>>& rows,
                        std::size_t frames = 2) {
  std::vector<std::string> labels;
  for (std::size_t f = 0; f < frames; ++f) labels.push_back("f" + std::to_string(f));
  EmbeddingStore store(dim, labels, Provenance::kImported, "test");
  for (const auto& [w, f, v] : rows) store.insert(w, f, {v, 1});
  return store;
}

// Random store where every word has a vector in both frames.
struct RandomCase {
  Vocabulary vocab;
  EmbeddingStore store;
};

RandomCase random_case(std::uint64_t seed, std::size_t words = 30, std::size_t dim = 6) {
  dt::Rng rng(seed);
  std::vector<std::string> names;
  std::vector<std::tuple<std::string, std::size_t, Vec>> rows;
  for (std::size_t i = 0; i < words; ++i) {
    names.push_back("w" + std::to_string(100 + i));
    for (std::size_t f = 0; f < 2; ++f) {
      Vec v(dim);
      for (auto& x : v) x = rng.normal();
      rows.emplace_back(names.back(), f, v);
    }
  }
  return {vocab_of(names), store_of(dim, rows)};
}

TEST(Cosine, Examples) {
  const Vec v{0.3, -1.2, 4.0};
  EXPECT_DOUBLE_EQ(cosine(v, v), 1.0);
  EXPECT_EQ(cosine(Vec{1, 0}, Vec{0, 1}), 0.0);
  EXPECT_NEAR(cosine(Vec{1, 0}, Vec{0.8, 0.6}), 0.8, 1e-15);
  EXPECT_EQ(cosine(Vec{0, 0}, Vec{1, 2}), 0.0);
  EXPECT_EQ(cosine(Vec{1, 2}, Vec{0, 0}), 0.0);
  EXPECT_THROW(cosine(Vec{1, 2}, Vec{1, 2, 3}), InvalidArgument);
}

TEST(Cosine, BoundsOnRandomVectors) {
  dt::Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    Vec a(1 + rng.below(8)), b;
    for (auto& x : a) x = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(10)) - 5.0);
    b = a;
    if (rng.below(2)) {
      for (auto& x : b) x = rng.normal();
    }
    const double c = cosine(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    EXPECT_NEAR(cosine(a, a), 1.0, 1e-12);
  }
}

TEST(ChangeScores, IdenticalVectorsRankLast) {
  const auto vocab = vocab_of({"alpha", "beta", "gamma"});
  const auto store = store_of(2, {{"alpha", 0, {1, 0}}, {"alpha", 1, {1, 0}},
                                  {"beta", 0, {1, 0}}, {"beta", 1, {0, 1}},
                                  {"gamma", 0, {1, 0}}, {"gamma", 1, {1, 1}}});
  const auto scores = semantic_change_scores(store, vocab, 0, 1);
  ASSERT_EQ(scores.reports.size(), 3u);
  EXPECT_EQ(scores.reports[0].word, "beta");
  EXPECT_EQ(scores.reports[0].rank, 1u);
  EXPECT_EQ(scores.reports[2].word, "alpha");
  EXPECT_DOUBLE_EQ(scores.reports[2].similarity, 1.0);
  EXPECT_EQ(scores.missing_words, 0u);
}

TEST(ChangeScores, MissingWordsAndErrors) {
  const auto vocab = vocab_of({"alpha", "beta", "only"});
  const auto store = store_of(2, {{"alpha", 0, {1, 0}}, {"alpha", 1, {1, 0}},
                                  {"beta", 0, {1, 0}}, {"beta", 1, {0, 1}}, {"only", 1, {1, 1}}});
  EXPECT_EQ(semantic_change_scores(store, vocab, 0, 1).missing_words, 1u);
  EXPECT_THROW(semantic_change_scores(store, vocab, 0, 0), InvalidArgument);
  EXPECT_THROW(semantic_change_scores(store, vocab, 0, 2), InvalidArgument);
  const auto lonely = store_of(2, {{"alpha", 0, {1, 0}}, {"beta", 1, {1, 0}}});
  EXPECT_THROW(semantic_change_scores(lonely, vocab, 0, 1), InvalidArgument);
}

std::string sentences_of(const std::vector<std::string>& words, dt::Rng& rng, int count, std::size_t len) {
  std::string out;
  for (int s = 0; s < count; ++s) {
    for (auto i : rng.sample(words.size(), len)) out += words[i] + " ";
    out += ". ";
  }
  return out;
}

TEST(ChangeScores, SwappedContextWordChangesMost) {
  const std::vector<std::string> pool_a{"apple", "apron", "arrow", "atlas"};
  const std::vector<std::string> pool_b{"basin", "baton", "beach", "bison"};
  std::vector<std::string> common{"cedar", "cider", "civic", "coral", "crane", "cubic"};
  common.insert(common.end(), pool_a.begin(), pool_a.end());
  common.insert(common.end(), pool_b.begin(), pool_b.end());

  dt::Rng rng(5);
  const std::string shared = sentences_of(common, rng, 400, 5);
  std::string early = shared, late = shared;
  for (int s = 0; s < 60; ++s) {
    early += "swapped " + sentences_of(pool_a, rng, 1, 3);
    late += "swapped " + sentences_of(pool_b, rng, 1, 3);
  }
  const auto plan = TimeFramePlan::parse("a:2000-2004,b:2010-2014");
  const auto corpus = dt::make_corpus(plan, {{2000, early}, {2010, late}});
  const auto vocab = build_vocabulary(corpus, VocabularyConfig{});
  ASSERT_TRUE(vocab.contains("swapped"));
  const auto store = compute_native_embeddings(corpus, vocab, NativeEmbeddingConfig{});
  const auto scores = semantic_change_scores(store, vocab, 0, 1);
  ASSERT_GE(scores.reports.size(), 2u);
  EXPECT_EQ(scores.reports[0].word, "swapped");
  EXPECT_LT(scores.reports[0].similarity, scores.reports[1].similarity);
}

TEST(DifferenceVectors, Examples) {
  const auto vocab = vocab_of({"same", "turn"});
  const auto store = store_of(2, {{"same", 0, {0.5, 2}}, {"same", 1, {0.5, 2}},
                                  {"turn", 0, {1, 0}}, {"turn", 1, {0, 1}}});
  const auto diffs = difference_vectors(store, vocab, 0, 1);
  ASSERT_EQ(diffs.size(), 2u);
  EXPECT_EQ(diffs[0].d, (Vec{0, 0}));
  EXPECT_EQ(diffs[0].magnitude, 0.0);
  EXPECT_EQ(diffs[1].d, (Vec{1, -1}));
  EXPECT_DOUBLE_EQ(diffs[1].magnitude, std::sqrt(2.0));
}

TEST(DifferenceVectors, MagnitudeMatchesIndependentNorm) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = random_case(seed);
    for (const auto& dv : difference_vectors(c.store, c.vocab, 0, 1)) {
      const auto a = *c.store.get(dv.word, 0);
      const auto b = *c.store.get(dv.word, 1);
      long double sum = 0.0L;
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(dv.d[i], a[i] - b[i]);
        sum += static_cast<long double>(dv.d[i]) * dv.d[i];
      }
      EXPECT_NEAR(dv.magnitude, static_cast<double>(std::sqrt(sum)), 1e-9);
    }
  }
}

TEST(DifferenceVectors, AntisymmetricUnderFrameSwap) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = random_case(seed);
    const auto fwd = difference_vectors(c.store, c.vocab, 0, 1);
    const auto back = difference_vectors(c.store, c.vocab, 1, 0);
    ASSERT_EQ(fwd.size(), back.size());
    for (std::size_t i = 0; i < fwd.size(); ++i) {
      for (std::size_t k = 0; k < fwd[i].d.size(); ++k) EXPECT_EQ(back[i].d[k], -fwd[i].d[k]);
      EXPECT_EQ(back[i].magnitude, fwd[i].magnitude);
    }
  }
}

TEST(MovementNeighbors, HandConstruction) {
  const auto vocab = vocab_of({"a", "b", "w"});
  const auto store = store_of(2, {{"w", 0, {0, 1}}, {"w", 1, {1, 0}},
                                  {"a", 0, {1, 0}}, {"a", 1, {1, 0}},
                                  {"b", 0, {0, 1}}, {"b", 1, {0, 1}}});
  const auto r = movement_neighbors("w", store, vocab, 1, 0, 1);
  ASSERT_EQ(r.moved_to.size(), 1u);
  ASSERT_EQ(r.diverted_from.size(), 1u);
  EXPECT_EQ(r.moved_to[0].word, "a");
  EXPECT_NEAR(r.moved_to[0].score, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(r.diverted_from[0].word, "b");
  EXPECT_NEAR(r.diverted_from[0].score, -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(r.no_significant_drift);

  // Scoring against the raw difference vector swaps the lists.
  const auto raw = movement_neighbors("w", store, vocab, 1, 0, 1, DriftDirection::kDifference);
  EXPECT_EQ(raw.moved_to[0].word, "b");
  EXPECT_EQ(raw.diverted_from[0].word, "a");
}

TEST(MovementNeighbors, ZeroDrift) {
  const auto vocab = vocab_of({"a", "w"});
  const auto store = store_of(2, {{"w", 0, {0, 1}}, {"w", 1, {0, 1}}, {"a", 0, {1, 0}}, {"a", 1, {1, 0}}});
  const auto r = movement_neighbors("w", store, vocab, 1, 0, 1);
  EXPECT_TRUE(r.no_significant_drift);
  EXPECT_TRUE(r.moved_to.empty());
  EXPECT_TRUE(r.diverted_from.empty());
}

TEST(MovementNeighbors, Errors) {
  const auto vocab = vocab_of({"a", "b", "w"});
  const auto store = store_of(2, {{"w", 0, {0, 1}}, {"a", 0, {1, 0}}, {"a", 1, {1, 0}},
                                  {"b", 0, {1, 1}}, {"b", 1, {1, 1}}});
  EXPECT_THROW(movement_neighbors("w", store, vocab, 1, 0, 1), InvalidArgument);
  EXPECT_THROW(movement_neighbors("a", store, vocab, 0, 0, 1), InvalidArgument);
  EXPECT_THROW(movement_neighbors("a", store, vocab, 3, 0, 1), InvalidArgument);
  EXPECT_NO_THROW(movement_neighbors("a", store, vocab, 2, 0, 1));
}

TEST(MovementNeighbors, DisjointListsAndExcludesTarget) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = random_case(seed, 25);
    const std::size_t k = 5;  // 2k < |V| - 1
    for (const auto& w : c.vocab.words()) {
      const auto r = movement_neighbors(w, c.store, c.vocab, k, 0, 1);
      ASSERT_EQ(r.moved_to.size(), k);
      ASSERT_EQ(r.diverted_from.size(), k);
      std::set<std::string> seen;
      for (const auto& s : r.moved_to) seen.insert(s.word);
      for (const auto& s : r.diverted_from) EXPECT_FALSE(seen.contains(s.word));
      EXPECT_FALSE(seen.contains(w));
      for (std::size_t i = 1; i < k; ++i) {
        EXPECT_GE(r.moved_to[i - 1].score, r.moved_to[i].score);
        EXPECT_LE(r.diverted_from[i - 1].score, r.diverted_from[i].score);
      }
    }
  }
}

EmbeddingStore scaled(const EmbeddingStore& store, double factor) {
  EmbeddingStore out(store.dim(), store.frame_labels(), store.provenance(), store.source());
  for (const auto& [key, rec] : store.records()) {
    EmbeddingRecord r = rec;
    for (auto& x : r.vector) x *= factor;
    out.insert(key.first, key.second, std::move(r));
  }
  return out;
}

std::vector<std::string> words_of(const std::vector<ScoredWord>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.word);
  return out;
}

TEST(ScaleInvariance, RankingsUnchanged) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto c = random_case(seed, 25);
    for (double factor : {0.001, 3.7, 250.0}) {
      const auto big = scaled(c.store, factor);
      const auto a = semantic_change_scores(c.store, c.vocab, 0, 1);
      const auto b = semantic_change_scores(big, c.vocab, 0, 1);
      ASSERT_EQ(a.reports.size(), b.reports.size());
      for (std::size_t i = 0; i < a.reports.size(); ++i) {
        EXPECT_EQ(a.reports[i].word, b.reports[i].word);
        EXPECT_NEAR(a.reports[i].similarity, b.reports[i].similarity, 1e-12);
      }
      for (const auto& w : c.vocab.words()) {
        const auto ra = movement_neighbors(w, c.store, c.vocab, 5, 0, 1);
        const auto rb = movement_neighbors(w, big, c.vocab, 5, 0, 1);
        EXPECT_EQ(words_of(ra.moved_to), words_of(rb.moved_to));
        EXPECT_EQ(words_of(ra.diverted_from), words_of(rb.diverted_from));
      }
    }
  }
}

}  // namespace
