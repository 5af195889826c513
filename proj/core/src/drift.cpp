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

#include "driftscope/drift.hpp"

#include <algorithm>
#include <cmath>

#include "driftscope/error.hpp"

namespace driftscope {

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("cosine of vectors with dimensions " + std::to_string(a.size()) +
                          " and " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

namespace {

void check_frames(const EmbeddingStore& store, std::size_t first, std::size_t last) {
  if (first == last) throw InvalidArgument("first and last frame must differ");
  if (first >= store.frame_count() || last >= store.frame_count()) {
    throw InvalidArgument("frame index out of range for a store with " +
                          std::to_string(store.frame_count()) + " frames");
  }
}

}  // namespace

ChangeScores semantic_change_scores(const EmbeddingStore& store, const Vocabulary& vocab,
                                    std::size_t first, std::size_t last) {
  check_frames(store, first, last);
  ChangeScores out;
  for (const auto& word : vocab.words()) {
    auto a = store.get(word, first);
    auto b = store.get(word, last);
    if (!a || !b) {
      ++out.missing_words;
      continue;
    }
    out.reports.push_back({word, cosine(*a, *b), 0});
  }
  if (out.reports.empty()) {
    throw InvalidArgument("no vocabulary word has vectors in both frame " + std::to_string(first) +
                          " and frame " + std::to_string(last));
  }
  // Words arrive in sorted order, so a stable sort leaves ties by word.
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const auto& x, const auto& y) { return x.similarity < y.similarity; });
  for (std::size_t i = 0; i < out.reports.size(); ++i) out.reports[i].rank = i + 1;
  return out;
}

std::vector<DifferenceVector> difference_vectors(const EmbeddingStore& store,
                                                 const Vocabulary& vocab, std::size_t first,
                                                 std::size_t last) {
  check_frames(store, first, last);
  std::vector<DifferenceVector> out;
  for (const auto& word : vocab.words()) {
    auto a = store.get(word, first);
    auto b = store.get(word, last);
    if (!a || !b) continue;
    DifferenceVector dv;
    dv.word = word;
    dv.d.resize(a->size());
    for (std::size_t i = 0; i < a->size(); ++i) dv.d[i] = (*a)[i] - (*b)[i];
    dv.magnitude = l2_norm(dv.d);
    out.push_back(std::move(dv));
  }
  return out;
}

MovementReport movement_neighbors(std::string_view word, const EmbeddingStore& store,
                                  const Vocabulary& vocab, std::size_t k, std::size_t first,
                                  std::size_t last, DriftDirection direction) {
  check_frames(store, first, last);
  if (k == 0) throw InvalidArgument("neighbor count k must be positive");
  if (vocab.size() == 0 || k > vocab.size() - 1) {
    throw InvalidArgument("neighbor count k=" + std::to_string(k) +
                          " exceeds the vocabulary size minus one");
  }
  auto old_vec = store.get(word, first);
  auto new_vec = store.get(word, last);
  if (!old_vec || !new_vec) {
    throw InvalidArgument("word '" + std::string(word) + "' lacks a vector in frame " +
                          std::to_string(!old_vec ? first : last));
  }

  MovementReport report;
  report.word = std::string(word);
  std::vector<double> delta(old_vec->size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    delta[i] = direction == DriftDirection::kOldToNew ? (*new_vec)[i] - (*old_vec)[i]
                                                      : (*old_vec)[i] - (*new_vec)[i];
  }
  if (std::all_of(delta.begin(), delta.end(), [](double x) { return x == 0.0; })) {
    report.no_significant_drift = true;
    return report;
  }

  std::vector<ScoredWord> scored;
  for (const auto& other : vocab.words()) {
    if (other == word) continue;
    auto candidate = store.get(other, first);
    if (!candidate) continue;
    scored.push_back({other, cosine(delta, *candidate)});
  }

  std::vector<ScoredWord> top = scored;
  std::stable_sort(top.begin(), top.end(),
                   [](const auto& x, const auto& y) { return x.score > y.score; });
  top.resize(std::min(k, top.size()));
  std::vector<ScoredWord> bottom = std::move(scored);
  std::stable_sort(bottom.begin(), bottom.end(),
                   [](const auto& x, const auto& y) { return x.score < y.score; });
  bottom.resize(std::min(k, bottom.size()));
  report.moved_to = std::move(top);
  report.diverted_from = std::move(bottom);
  return report;
}

}  // namespace driftscope
