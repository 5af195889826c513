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

#ifndef DRIFTSCOPE_PIPELINE_HPP_
#define DRIFTSCOPE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftscope/artifacts.hpp"
#include "driftscope/clustering.hpp"
#include "driftscope/corpus.hpp"
#include "driftscope/drift.hpp"
#include "driftscope/embedding_store.hpp"
#include "driftscope/error.hpp"
#include "driftscope/lda.hpp"
#include "driftscope/ranking.hpp"

namespace driftscope {

// A configuration that failed validate(). Carries every violation.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Raised when a pipeline stage fails; what() starts with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

enum class EmbeddingSource { kNative, kImport };

struct RunConfig {
  std::filesystem::path corpus_path;
  IngestFormat corpus_format = IngestFormat::kJsonl;
  std::vector<TimeFrame> frames = TimeFramePlan::acl_default().frames();
  std::optional<std::size_t> first_frame;  // default 0
  std::optional<std::size_t> last_frame;   // default frames.size() - 1

  std::uint64_t min_frequency = 100;
  std::size_t min_length = 3;
  std::size_t min_frames = 2;
  std::optional<std::filesystem::path> stopwords_path;
  std::optional<std::filesystem::path> allowlist_path;

  EmbeddingSource embedding_source = EmbeddingSource::kNative;
  std::filesystem::path embeddings_path;
  NativeEmbeddingConfig native;

  DriftDirection neighbor_direction = DriftDirection::kOldToNew;
  std::vector<std::string> movement_words;  // empty: the most changed words
  std::size_t neighbor_k = 5;

  APParams ap;
  std::size_t min_cluster_size = 5;
  EmdMode emd_mode = EmdMode::kCounts;

  bool lda_enabled = false;
  LdaConfig lda;
  std::size_t lda_top_n = 10;

  std::size_t report_top_k = 10;
  std::filesystem::path out_dir = "driftscope-out";
  std::uint64_t seed = 1;

  std::size_t first() const { return first_frame.value_or(0); }
  std::size_t last() const {
    return last_frame.value_or(frames.empty() ? 0 : frames.size() - 1);
  }
};

// Applies one "key = value" setting. Relative paths are resolved against
// `base_dir`. Throws InvalidArgument on an unknown key or unparsable value.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});
// Reads a configuration file of "key = value" lines ('#' starts a comment).
RunConfig load_config(const std::filesystem::path& path);
// Every setting of `cfg` as key/value pairs, defaults included. The output
// directory is left out so that reports do not depend on where they are written.
std::vector<std::pair<std::string, std::string>> config_settings(const RunConfig& cfg);
std::string config_text(const RunConfig& cfg);

// Never throws; an empty result means the configuration is usable.
std::vector<std::string> validate(const RunConfig& cfg);

// Artifact file names inside the output directory.
namespace artifact {
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kVocabulary = "vocabulary.tsv";
inline constexpr std::string_view kEmbeddings = "embeddings.tsv";
inline constexpr std::string_view kDrift = "drift.json";
inline constexpr std::string_view kDriftMarkdown = "drift.md";
inline constexpr std::string_view kClustersAll = "clusters_unfiltered.json";
inline constexpr std::string_view kClusters = "clusters.json";
inline constexpr std::string_view kClusterSummary = "cluster_summary.json";
inline constexpr std::string_view kScores = "scores.json";
inline constexpr std::string_view kScoresMarkdown = "ranking.md";
inline constexpr std::string_view kLda = "lda.json";
inline constexpr std::string_view kReport = "report.json";
inline constexpr std::string_view kReportMarkdown = "report.md";
inline constexpr std::string_view kConfig = "config.resolved";
inline constexpr std::string_view kTiming = "timing.json";
inline constexpr std::string_view kLock = ".driftscope.lock";
}  // namespace artifact

// Exclusive claim on an output directory for the object's lifetime.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& out_dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> frame_labels;
  std::vector<std::size_t> documents_per_frame;
  std::size_t excluded_records = 0;
  std::size_t vocabulary_size = 0;
  std::size_t embedding_rows = 0;
  std::size_t scored_words = 0;
  std::size_t missing_words = 0;
  ClusterSummary clusters;
  std::vector<ChangeReport> most_changed;
  std::vector<ChangeReport> least_changed;
  std::vector<MovementReport> movements;
  std::vector<ClusterScore> top_clusters;
  std::optional<std::vector<LdaTopicRow>> lda;
  // Resolved choices the method leaves open, as (name, value).
  std::vector<std::pair<std::string, std::string>> resolved_defaults;
  // Wall-clock time per stage. Written to timing.json, never to report.json.
  std::vector<StageTiming> timing;

  std::string to_json() const;
  std::string to_markdown() const;
};

// Individual stages. Each reads the artifacts of earlier stages from
// cfg.out_dir and writes its own. Failures surface as StageError.
void stage_ingest(const RunConfig& cfg);
void stage_vocab(const RunConfig& cfg);
void stage_embed(const RunConfig& cfg);
void stage_drift(const RunConfig& cfg);
void stage_cluster(const RunConfig& cfg);
void stage_rank(const RunConfig& cfg);
void stage_lda(const RunConfig& cfg);
RunReport stage_report(const RunConfig& cfg);

// Validates (throwing ValidationError), locks the output directory and runs
// every stage in order, then writes report.json, report.md, config.resolved
// and timing.json.
RunReport run(const RunConfig& cfg);

}  // namespace driftscope

#endif  // DRIFTSCOPE_PIPELINE_HPP_
