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

#ifndef DRIFTSCOPE_DRIFT_HPP_
#define DRIFTSCOPE_DRIFT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftscope/corpus.hpp"
#include "driftscope/embedding_store.hpp"

namespace driftscope {

// Cosine of the angle between a and b; 0 when either vector is all zero.
// Throws InvalidArgument on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

double l2_norm(std::span<const double> v);

struct ChangeReport {
  std::string word;
  double similarity = 0.0;  // cosine(u_first, u_last)
  std::size_t rank = 0;     // 1 = most changed

  bool operator==(const ChangeReport&) const = default;
};

struct ChangeScores {
  // Ascending by similarity; ties by word.
  std::vector<ChangeReport> reports;
  // Vocabulary words lacking a vector in the first or the last frame.
  std::size_t missing_words = 0;
};

// Overall change per word between two frames. Words absent from either frame
// are skipped. Throws InvalidArgument when first == last, a frame is out of
// range or no word has both vectors.
ChangeScores semantic_change_scores(const EmbeddingStore& store, const Vocabulary& vocab,
                                    std::size_t first, std::size_t last);

struct DifferenceVector {
  std::string word;
  std::vector<double> d;  // u_first - u_last
  double magnitude = 0.0;

  bool operator==(const DifferenceVector&) const = default;
};

// One entry per vocabulary word present in both frames, in word order.
std::vector<DifferenceVector> difference_vectors(const EmbeddingStore& store,
                                                 const Vocabulary& vocab, std::size_t first,
                                                 std::size_t last);

// Direction scored against candidate first-frame vectors.
enum class DriftDirection {
  kOldToNew,    // u_last - u_first: high score = moved towards
  kDifference,  // u_first - u_last, the raw difference vector
};

struct ScoredWord {
  std::string word;
  double score = 0.0;

  bool operator==(const ScoredWord&) const = default;
};

struct MovementReport {
  std::string word;
  std::vector<ScoredWord> moved_to;       // highest scores first
  std::vector<ScoredWord> diverted_from;  // lowest scores first
  bool no_significant_drift = false;
};

// Scores every other vocabulary word w_j with a first-frame vector by
// cosine(direction, u_{w_j}^first). moved_to holds the top k, diverted_from
// the bottom k; ties are broken by word order. Zero drift yields
// empty lists with no_significant_drift set.
MovementReport movement_neighbors(std::string_view word, const EmbeddingStore& store,
                                  const Vocabulary& vocab, std::size_t k, std::size_t first,
                                  std::size_t last,
                                  DriftDirection direction = DriftDirection::kOldToNew);

}  // namespace driftscope

#endif  // DRIFTSCOPE_DRIFT_HPP_
