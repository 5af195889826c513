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

#ifndef DRIFTSCOPE_RANKING_HPP_
#define DRIFTSCOPE_RANKING_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "driftscope/clustering.hpp"
#include "driftscope/corpus.hpp"

namespace driftscope {

inline constexpr std::size_t kHistogramBins = 10;

// bins[n - 1] counts sentences containing exactly n distinct cluster words;
// the last bin also holds sentences with more than kHistogramBins.
// Sentences with no cluster word are not binned but count towards
// total_sentences.
struct CooccurrenceHistogram {
  std::array<std::uint64_t, kHistogramBins> bins{};
  std::uint64_t total_sentences = 0;

  std::uint64_t binned() const;
  // bins / total_sentences; all zero when the frame has no sentences.
  std::array<double, kHistogramBins> normalized() const;

  bool operator==(const CooccurrenceHistogram&) const = default;
};

CooccurrenceHistogram cooccurrence_histogram(const Cluster& cluster,
                                             std::span<const TokenSet> frame_sentences);

enum class EmdMode { kCounts, kNormalized };

EmdMode parse_emd_mode(std::string_view name);
std::string_view to_string(EmdMode mode);

// 1-D earth mover's distance with ground distance |i - j| between bins,
// evaluated as the L1 distance between cumulative sums.
//   kNormalized: each histogram is divided by its own bin total first; throws
//                InvalidArgument when a total is zero.
//   kCounts:     raw counts; unmatched mass is carried past the last bin at
//                one unit of cost per bin.
double emd(const CooccurrenceHistogram& first, const CooccurrenceHistogram& last, EmdMode mode);
double emd(std::span<const double> first, std::span<const double> last, EmdMode mode);

struct ClusterScore {
  Cluster cluster;
  double emd = 0.0;
  std::size_t rank = 0;  // 1 = largest emd
  CooccurrenceHistogram hist_first;
  CooccurrenceHistogram hist_last;
};

// Scores each cluster by emd(first-frame histogram, last-frame histogram) and
// sorts descending. Ties: more members first, then exemplar word order.
std::vector<ClusterScore> rank_clusters(const std::vector<Cluster>& clusters,
                                        const SlicedCorpus& corpus, std::size_t first,
                                        std::size_t last, EmdMode mode);

}  // namespace driftscope

#endif  // DRIFTSCOPE_RANKING_HPP_
