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

#include "driftscope/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "driftscope/error.hpp"

namespace driftscope {

std::uint64_t CooccurrenceHistogram::binned() const {
  std::uint64_t sum = 0;
  for (auto b : bins) sum += b;
  return sum;
}

std::array<double, kHistogramBins> CooccurrenceHistogram::normalized() const {
  std::array<double, kHistogramBins> out{};
  if (total_sentences == 0) return out;
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    out[i] = static_cast<double>(bins[i]) / static_cast<double>(total_sentences);
  }
  return out;
}

CooccurrenceHistogram cooccurrence_histogram(const Cluster& cluster,
                                             std::span<const TokenSet> frame_sentences) {
  if (cluster.members.empty()) throw InvalidArgument("cooccurrence histogram of an empty cluster");
  const std::unordered_set<std::string_view> members(cluster.members.begin(), cluster.members.end());
  CooccurrenceHistogram h;
  h.total_sentences = frame_sentences.size();
  for (const auto& sentence : frame_sentences) {
    // Token sets are duplicate-free, so this counts distinct members.
    std::size_t common = 0;
    for (const auto& token : sentence) {
      if (members.contains(token)) ++common;
    }
    if (common > 0) ++h.bins[std::min(common, kHistogramBins) - 1];
  }
  return h;
}

EmdMode parse_emd_mode(std::string_view name) {
  if (name == "counts") return EmdMode::kCounts;
  if (name == "normalized") return EmdMode::kNormalized;
  throw InvalidArgument("unknown EMD mode '" + std::string(name) + "' (expected counts or normalized)");
}

std::string_view to_string(EmdMode mode) {
  return mode == EmdMode::kCounts ? "counts" : "normalized";
}

double emd(std::span<const double> first, std::span<const double> last, EmdMode mode) {
  if (first.size() != last.size()) {
    throw InvalidArgument("EMD between histograms with different bin counts");
  }
  double scale_first = 1.0;
  double scale_last = 1.0;
  if (mode == EmdMode::kNormalized) {
    double sf = 0.0, sl = 0.0;
    for (double v : first) sf += v;
    for (double v : last) sl += v;
    if (sf == 0.0 || sl == 0.0) {
      throw InvalidArgument("normalized EMD is undefined for a histogram with no mass");
    }
    scale_first = sf;
    scale_last = sl;
  }
  double cdf_first = 0.0;
  double cdf_last = 0.0;
  double work = 0.0;
  for (std::size_t k = 0; k < first.size(); ++k) {
    cdf_first += first[k] / scale_first;
    cdf_last += last[k] / scale_last;
    work += std::abs(cdf_first - cdf_last);
  }
  return work;
}

double emd(const CooccurrenceHistogram& first, const CooccurrenceHistogram& last, EmdMode mode) {
  std::array<double, kHistogramBins> a{};
  std::array<double, kHistogramBins> b{};
  for (std::size_t i = 0; i < kHistogramBins; ++i) {
    a[i] = static_cast<double>(first.bins[i]);
    b[i] = static_cast<double>(last.bins[i]);
  }
  return emd(a, b, mode);
}

std::vector<ClusterScore> rank_clusters(const std::vector<Cluster>& clusters,
                                        const SlicedCorpus& corpus, std::size_t first,
                                        std::size_t last, EmdMode mode) {
  if (first == last) throw InvalidArgument("first and last frame must differ");
  if (first >= corpus.plan().size() || last >= corpus.plan().size()) {
    throw InvalidArgument("frame index out of range for the corpus plan");
  }
  const auto& first_sentences = corpus.frame_sentences(first);
  const auto& last_sentences = corpus.frame_sentences(last);

  std::vector<ClusterScore> scores;
  scores.reserve(clusters.size());
  for (const auto& c : clusters) {
    ClusterScore s;
    s.cluster = c;
    s.hist_first = cooccurrence_histogram(c, first_sentences);
    s.hist_last = cooccurrence_histogram(c, last_sentences);
    try {
      s.emd = emd(s.hist_first, s.hist_last, mode);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("cluster " + std::to_string(c.id) + " (exemplar '" + c.exemplar +
                            "'): " + e.what());
    }
    scores.push_back(std::move(s));
  }
  std::sort(scores.begin(), scores.end(), [](const ClusterScore& x, const ClusterScore& y) {
    if (x.emd != y.emd) return x.emd > y.emd;
    if (x.cluster.members.size() != y.cluster.members.size()) {
      return x.cluster.members.size() > y.cluster.members.size();
    }
    if (x.cluster.exemplar != y.cluster.exemplar) return x.cluster.exemplar < y.cluster.exemplar;
    return x.cluster.id < y.cluster.id;
  });
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].rank = i + 1;
  return scores;
}

}  // namespace driftscope
