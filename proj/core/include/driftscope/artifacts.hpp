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

#ifndef DRIFTSCOPE_ARTIFACTS_HPP_
#define DRIFTSCOPE_ARTIFACTS_HPP_

// Plain-text persistence for every intermediate result of a run. Each stage
// reads only what earlier stages wrote through these functions.

#include <filesystem>
#include <string>
#include <vector>

#include "driftscope/clustering.hpp"
#include "driftscope/corpus.hpp"
#include "driftscope/drift.hpp"
#include "driftscope/lda.hpp"
#include "driftscope/ranking.hpp"

namespace driftscope {

// corpus.jsonl: a header object {"format": "driftscope-corpus", "version": 1,
// "plan": "<plan string>", "excluded": n} followed by one
// {"id", "year", "frame", "sentences": [[token, ...], ...]} object per document.
void write_corpus(const SlicedCorpus& corpus, const std::filesystem::path& path);
SlicedCorpus read_corpus(const std::filesystem::path& path);

// vocabulary.tsv: "#driftscope-vocabulary\tv1\tframes=<N>" then
// "<word>\t<total>\t<presence>\t<c_0>,<c_1>,...".
void write_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocabulary(const std::filesystem::path& path);

// [{"id", "exemplar", "members": [...]}]
void write_clusters(const std::vector<Cluster>& clusters, const std::filesystem::path& path);
std::vector<Cluster> read_clusters(const std::filesystem::path& path);

struct ClusterSummary {
  std::size_t clusters_before = 0;
  std::size_t clusters_after = 0;
  std::size_t clustered_words = 0;
  std::size_t words_removed = 0;
  double q1 = 0.0;
  std::size_t ap_iterations = 0;
  bool ap_converged = false;
  double ap_preference = 0.0;
  std::size_t min_size = 0;

  bool operator==(const ClusterSummary&) const = default;
};
void write_cluster_summary(const ClusterSummary& summary, const std::filesystem::path& path);
ClusterSummary read_cluster_summary(const std::filesystem::path& path);

// [{"rank", "emd", "exemplar", "members", "hist_first", "hist_last"}]
// Histograms carry "bins" and "total_sentences".
void write_scores(const std::vector<ClusterScore>& scores, const std::filesystem::path& path);
std::vector<ClusterScore> read_scores(const std::filesystem::path& path);
std::string scores_markdown(const std::vector<ClusterScore>& scores);

struct DriftArtifact {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t missing_words = 0;
  std::vector<ChangeReport> scores;  // ascending similarity
  std::vector<MovementReport> movements;
};
// {"first", "last", "missing_words", "scores": [{word, similarity, rank}],
//  "neighbors": [{word, no_significant_drift, moved_to, diverted_from}]}
void write_drift(const DriftArtifact& drift, const std::filesystem::path& path);
DriftArtifact read_drift(const std::filesystem::path& path);
std::string drift_markdown(const DriftArtifact& drift, std::size_t top_k);

struct LdaTopicRow {
  std::size_t topic = 0;
  std::vector<std::string> top_words;
  double importance_first = 0.0;
  double importance_last = 0.0;
  double gain = 0.0;

  bool operator==(const LdaTopicRow&) const = default;
};
// [{"topic", "top_words", "importance_first", "importance_last", "gain"}]
void write_lda(const std::vector<LdaTopicRow>& rows, const std::filesystem::path& path);
std::vector<LdaTopicRow> read_lda(const std::filesystem::path& path);

// Writes `content` to `path` through a temporary file and a rename.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace driftscope

#endif  // DRIFTSCOPE_ARTIFACTS_HPP_
