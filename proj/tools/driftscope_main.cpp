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

// driftscope command-line interface.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftscope/pipeline.hpp"

namespace {

using driftscope::RunConfig;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string corpus;
  std::string format;
  std::string plan;
  std::string frames;
  std::string emd_mode;
  std::string embeddings;
  std::vector<std::string> settings;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Configuration file (key = value lines)");
  cmd->add_option("--out", f.out, "Output directory for artifacts");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--frames", f.frames, "First and last frame index, e.g. 0,4");
  cmd->add_option("--emd-mode", f.emd_mode, "counts or normalized");
  cmd->add_option("--corpus", f.corpus, "Corpus path");
  cmd->add_option("--format", f.format, "Corpus format: jsonl or directory");
  cmd->add_option("--plan", f.plan, "Time frames, e.g. a:1979-1995,b:1996-2000");
  cmd->add_option("--set", f.settings, "Override any setting, key=value (repeatable)");
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : driftscope::load_config(f.config);
  auto set = [&](std::string_view key, const std::string& value) {
    if (!value.empty()) driftscope::apply_setting(cfg, key, value);
  };
  for (const auto& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw driftscope::InvalidArgument("--set expects key=value, got '" + s + "'");
    driftscope::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  set("corpus.path", f.corpus);
  set("corpus.format", f.format);
  set("frames", f.plan);
  set("out", f.out);
  set("rank.emd_mode", f.emd_mode);
  if (!f.embeddings.empty()) {
    driftscope::apply_setting(cfg, "embeddings.source", "import");
    driftscope::apply_setting(cfg, "embeddings.path", f.embeddings);
  }
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.frames.empty()) {
    const auto comma = f.frames.find(',');
    if (comma == std::string::npos) {
      throw driftscope::InvalidArgument("--frames expects <first>,<last>, got '" + f.frames + "'");
    }
    driftscope::apply_setting(cfg, "frames.first", f.frames.substr(0, comma));
    driftscope::apply_setting(cfg, "frames.last", f.frames.substr(comma + 1));
  }
  return cfg;
}

// Checks only what a single stage needs; `run` validates everything.
void require_valid(const RunConfig& cfg, bool needs_corpus) {
  std::vector<std::string> problems;
  for (auto& v : driftscope::validate(cfg)) {
    const bool corpus_issue = v.rfind("corpus", 0) == 0;
    if (corpus_issue && !needs_corpus) continue;
    problems.push_back(std::move(v));
  }
  if (!problems.empty()) throw driftscope::ValidationError(std::move(problems));
}

void print_summary(const driftscope::RunReport& report, const RunConfig& cfg) {
  std::cout << "documents:";
  for (auto n : report.documents_per_frame) std::cout << ' ' << n;
  std::cout << " (excluded " << report.excluded_records << ")\n"
            << "vocabulary: " << report.vocabulary_size << " words\n"
            << "clusters: " << report.clusters.clusters_before << " before filtering, "
            << report.clusters.clusters_after << " after\n";
  for (const auto& s : report.top_clusters) {
    std::printf("%3zu  %10.2f  %s", s.rank, s.emd, s.cluster.exemplar.c_str());
    std::printf("  (%zu members)\n", s.cluster.members.size());
  }
  std::cout << "report: " << (cfg.out_dir / driftscope::artifact::kReport).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftscope: semantic change summaries for diachronic corpora"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* c_ingest = app.add_subcommand("ingest", "Slice the raw corpus into time frames");
  auto* c_vocab = app.add_subcommand("vocab", "Build the filtered vocabulary");
  auto* c_embed = app.add_subcommand("embed", "Compute native PPMI embeddings");
  auto* c_import = app.add_subcommand("import-embeddings", "Import an embedding interchange file");
  auto* c_drift = app.add_subcommand("drift", "Score overall change and word movement");
  auto* c_cluster = app.add_subcommand("cluster", "Cluster words by difference vector and filter");
  auto* c_rank = app.add_subcommand("rank", "Rank clusters by co-occurrence EMD");
  auto* c_lda = app.add_subcommand("lda-baseline", "Topic-model baseline ranking");
  auto* c_run = app.add_subcommand("run", "Run every stage and write the report");
  auto* c_report = app.add_subcommand("report", "Assemble the report from existing artifacts");
  for (auto* cmd : {c_ingest, c_vocab, c_embed, c_import, c_drift, c_cluster, c_rank, c_lda, c_run, c_report}) {
    add_common(cmd, flags);
  }
  c_import->add_option("file", flags.embeddings, "Interchange TSV to import")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = resolve_config(flags);
    using namespace driftscope;
    if (c_run->parsed()) {
      const RunReport report = run(cfg);
      print_summary(report, cfg);
      return 0;
    }

    const bool needs_corpus = c_ingest->parsed();
    require_valid(cfg, needs_corpus);
    OutputLock lock(cfg.out_dir);
    if (c_ingest->parsed()) {
      stage_ingest(cfg);
      std::cout << "wrote " << (cfg.out_dir / artifact::kCorpus).string() << "\n";
    } else if (c_vocab->parsed()) {
      stage_vocab(cfg);
      std::cout << "wrote " << (cfg.out_dir / artifact::kVocabulary).string() << "\n";
    } else if (c_embed->parsed() || c_import->parsed()) {
      stage_embed(cfg);
      std::cout << "wrote " << (cfg.out_dir / artifact::kEmbeddings).string() << "\n";
    } else if (c_drift->parsed()) {
      stage_drift(cfg);
      std::cout << read_text_file(cfg.out_dir / artifact::kDriftMarkdown);
    } else if (c_cluster->parsed()) {
      stage_cluster(cfg);
      const auto s = read_cluster_summary(cfg.out_dir / artifact::kClusterSummary);
      std::cout << "clusters: " << s.clusters_before << " before filtering, " << s.clusters_after
                << " after (wrote " << (cfg.out_dir / artifact::kClusters).string() << ")\n";
    } else if (c_rank->parsed()) {
      stage_rank(cfg);
      std::cout << read_text_file(cfg.out_dir / artifact::kScoresMarkdown);
    } else if (c_lda->parsed()) {
      stage_lda(cfg);
      std::cout << "wrote " << (cfg.out_dir / artifact::kLda).string() << "\n";
    } else if (c_report->parsed()) {
      const RunReport report = stage_report(cfg);
      print_summary(report, cfg);
    }
    return 0;
  } catch (const driftscope::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const driftscope::InvalidArgument& e) {
    // Bad flag values or configuration settings.
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const driftscope::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
