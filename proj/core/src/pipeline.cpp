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

#include "driftscope/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "text_util.hpp"

namespace driftscope {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

StageError::StageError(std::string stage, const std::string& message)
    : Error("stage '" + stage + "' failed: " + message), stage_(std::move(stage)) {}

// --- configuration ---------------------------------------------------------

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
  T out{};
  if (!detail::parse_number(value, out)) {
    throw InvalidArgument("setting '" + std::string(key) + "' has invalid value '" +
                          std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw InvalidArgument("setting '" + std::string(key) + "' expects true or false, got '" +
                        std::string(value) + "'");
}

fs::path resolve_path(std::string_view value, const fs::path& base_dir) {
  fs::path p{std::string(value)};
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

std::vector<TimeFrame> parse_frames_unchecked(std::string_view text) {
  std::vector<TimeFrame> frames;
  for (auto item : detail::split(text, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    const auto range = colon == std::string_view::npos ? std::string_view{} : detail::trim(item.substr(colon + 1));
    const auto dash = range.empty() ? std::string_view::npos : range.find('-', 1);
    TimeFrame f;
    if (colon == std::string_view::npos || dash == std::string_view::npos ||
        !detail::parse_int(detail::trim(range.substr(0, dash)), f.year_start) ||
        !detail::parse_int(detail::trim(range.substr(dash + 1)), f.year_end)) {
      throw InvalidArgument("frame '" + std::string(item) + "' must look like label:start-end");
    }
    f.label = std::string(detail::trim(item.substr(0, colon)));
    frames.push_back(std::move(f));
  }
  return frames;
}

std::string frames_text(const std::vector<TimeFrame>& frames) {
  std::string out;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i) out += ',';
    out += frames[i].label + ':' + std::to_string(frames[i].year_start) + '-' +
           std::to_string(frames[i].year_end);
  }
  return out;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value,
                   const fs::path& base_dir) {
  value = detail::trim(value);
  key = detail::trim(key);
  if (key == "corpus.path") cfg.corpus_path = resolve_path(value, base_dir);
  else if (key == "corpus.format") cfg.corpus_format = parse_ingest_format(value);
  else if (key == "frames") cfg.frames = parse_frames_unchecked(value);
  else if (key == "frames.first") cfg.first_frame = parse_value<std::size_t>(key, value);
  else if (key == "frames.last") cfg.last_frame = parse_value<std::size_t>(key, value);
  else if (key == "vocab.min_frequency") cfg.min_frequency = parse_value<std::uint64_t>(key, value);
  else if (key == "vocab.min_length") cfg.min_length = parse_value<std::size_t>(key, value);
  else if (key == "vocab.min_frames") cfg.min_frames = parse_value<std::size_t>(key, value);
  else if (key == "vocab.stopwords") {
    if (value.empty()) cfg.stopwords_path.reset();
    else cfg.stopwords_path = resolve_path(value, base_dir);
  } else if (key == "vocab.allowlist") {
    if (value.empty()) cfg.allowlist_path.reset();
    else cfg.allowlist_path = resolve_path(value, base_dir);
  } else if (key == "embeddings.source") {
    if (value == "native") cfg.embedding_source = EmbeddingSource::kNative;
    else if (value == "import") cfg.embedding_source = EmbeddingSource::kImport;
    else throw InvalidArgument("embeddings.source must be native or import");
  } else if (key == "embeddings.path") {
    cfg.embeddings_path = value.empty() ? fs::path{} : resolve_path(value, base_dir);
  } else if (key == "native.context_vocab_size") {
    cfg.native.context_vocab_size = parse_value<std::size_t>(key, value);
  } else if (key == "native.window") cfg.native.window = parse_value<std::size_t>(key, value);
  else if (key == "native.ppmi_shift") cfg.native.ppmi_shift = parse_value<double>(key, value);
  else if (key == "drift.direction") {
    if (value == "old_to_new") cfg.neighbor_direction = DriftDirection::kOldToNew;
    else if (value == "difference") cfg.neighbor_direction = DriftDirection::kDifference;
    else throw InvalidArgument("drift.direction must be old_to_new or difference");
  } else if (key == "drift.words") {
    cfg.movement_words.clear();
    for (auto w : detail::split(value, ',')) {
      w = detail::trim(w);
      if (!w.empty()) cfg.movement_words.emplace_back(w);
    }
  } else if (key == "drift.neighbors") cfg.neighbor_k = parse_value<std::size_t>(key, value);
  else if (key == "ap.damping") cfg.ap.damping = parse_value<double>(key, value);
  else if (key == "ap.max_iterations") cfg.ap.max_iterations = parse_value<std::size_t>(key, value);
  else if (key == "ap.convergence_window") cfg.ap.convergence_window = parse_value<std::size_t>(key, value);
  else if (key == "ap.preference") {
    if (value == "median") cfg.ap.preference.reset();
    else cfg.ap.preference = parse_value<double>(key, value);
  } else if (key == "filter.min_size") cfg.min_cluster_size = parse_value<std::size_t>(key, value);
  else if (key == "rank.emd_mode") cfg.emd_mode = parse_emd_mode(value);
  else if (key == "lda.enabled") cfg.lda_enabled = parse_bool(key, value);
  else if (key == "lda.topics") cfg.lda.topics = parse_value<std::size_t>(key, value);
  else if (key == "lda.passes") cfg.lda.passes = parse_value<std::size_t>(key, value);
  else if (key == "lda.min_doc_freq") cfg.lda.min_doc_freq = parse_value<std::size_t>(key, value);
  else if (key == "lda.max_doc_fraction") cfg.lda.max_doc_fraction = parse_value<double>(key, value);
  else if (key == "lda.alpha") {
    if (value == "auto") cfg.lda.alpha.reset();
    else cfg.lda.alpha = parse_value<double>(key, value);
  } else if (key == "lda.beta") cfg.lda.beta = parse_value<double>(key, value);
  else if (key == "lda.top_n") cfg.lda_top_n = parse_value<std::size_t>(key, value);
  else if (key == "report.top_k") cfg.report_top_k = parse_value<std::size_t>(key, value);
  else if (key == "workers") {
    cfg.native.workers = cfg.ap.workers = parse_value<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "out") cfg.out_dir = resolve_path(value, base_dir);
  else throw InvalidArgument("unknown setting '" + std::string(key) + "'");
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open configuration file " + path.string());
  RunConfig cfg;
  const fs::path base = path.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1), base);
    } catch (const InvalidArgument& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_settings(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> s;
  auto opt_path = [](const std::optional<fs::path>& p) { return p ? p->string() : std::string(); };
  s.emplace_back("corpus.path", cfg.corpus_path.string());
  s.emplace_back("corpus.format", std::string(to_string(cfg.corpus_format)));
  s.emplace_back("frames", frames_text(cfg.frames));
  s.emplace_back("frames.first", std::to_string(cfg.first()));
  s.emplace_back("frames.last", std::to_string(cfg.last()));
  s.emplace_back("vocab.min_frequency", std::to_string(cfg.min_frequency));
  s.emplace_back("vocab.min_length", std::to_string(cfg.min_length));
  s.emplace_back("vocab.min_frames", std::to_string(cfg.min_frames));
  s.emplace_back("vocab.stopwords", opt_path(cfg.stopwords_path));
  s.emplace_back("vocab.allowlist", opt_path(cfg.allowlist_path));
  s.emplace_back("embeddings.source", cfg.embedding_source == EmbeddingSource::kNative ? "native" : "import");
  s.emplace_back("embeddings.path", cfg.embeddings_path.string());
  s.emplace_back("native.context_vocab_size", std::to_string(cfg.native.context_vocab_size));
  s.emplace_back("native.window", std::to_string(cfg.native.window));
  s.emplace_back("native.ppmi_shift", shortest(cfg.native.ppmi_shift));
  s.emplace_back("drift.direction",
                 cfg.neighbor_direction == DriftDirection::kOldToNew ? "old_to_new" : "difference");
  std::string words;
  for (std::size_t i = 0; i < cfg.movement_words.size(); ++i) {
    if (i) words += ',';
    words += cfg.movement_words[i];
  }
  s.emplace_back("drift.words", words);
  s.emplace_back("drift.neighbors", std::to_string(cfg.neighbor_k));
  s.emplace_back("ap.damping", shortest(cfg.ap.damping));
  s.emplace_back("ap.max_iterations", std::to_string(cfg.ap.max_iterations));
  s.emplace_back("ap.convergence_window", std::to_string(cfg.ap.convergence_window));
  s.emplace_back("ap.preference", cfg.ap.preference ? shortest(*cfg.ap.preference) : "median");
  s.emplace_back("filter.min_size", std::to_string(cfg.min_cluster_size));
  s.emplace_back("rank.emd_mode", std::string(to_string(cfg.emd_mode)));
  s.emplace_back("lda.enabled", cfg.lda_enabled ? "true" : "false");
  s.emplace_back("lda.topics", std::to_string(cfg.lda.topics));
  s.emplace_back("lda.passes", std::to_string(cfg.lda.passes));
  s.emplace_back("lda.min_doc_freq", std::to_string(cfg.lda.min_doc_freq));
  s.emplace_back("lda.max_doc_fraction", shortest(cfg.lda.max_doc_fraction));
  s.emplace_back("lda.alpha", cfg.lda.alpha ? shortest(*cfg.lda.alpha) : "auto");
  s.emplace_back("lda.beta", shortest(cfg.lda.beta));
  s.emplace_back("lda.top_n", std::to_string(cfg.lda_top_n));
  s.emplace_back("report.top_k", std::to_string(cfg.report_top_k));
  s.emplace_back("seed", std::to_string(cfg.seed));
  return s;
}

std::string config_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_settings(cfg)) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> validate(const RunConfig& cfg) {
  std::vector<std::string> out;
  std::error_code ec;
  if (cfg.corpus_path.empty()) {
    out.push_back("corpus.path is required");
  } else if (!fs::exists(cfg.corpus_path, ec)) {
    out.push_back("corpus path " + cfg.corpus_path.string() + " does not exist");
  }
  for (auto& v : TimeFramePlan::violations(cfg.frames)) out.push_back(std::move(v));
  if (cfg.first() >= cfg.frames.size() || cfg.last() >= cfg.frames.size()) {
    out.push_back("frame indices " + std::to_string(cfg.first()) + "," + std::to_string(cfg.last()) +
                  " are out of range for " + std::to_string(cfg.frames.size()) + " frames");
  }
  if (cfg.first() == cfg.last()) out.push_back("first and last frame must differ");
  if (cfg.min_length == 0) out.push_back("vocab.min_length must be positive");
  if (cfg.min_frames == 0) out.push_back("vocab.min_frames must be positive");
  if (cfg.stopwords_path && !fs::exists(*cfg.stopwords_path, ec)) {
    out.push_back("stopword list " + cfg.stopwords_path->string() + " does not exist");
  }
  if (cfg.allowlist_path && !fs::exists(*cfg.allowlist_path, ec)) {
    out.push_back("allowlist " + cfg.allowlist_path->string() + " does not exist");
  }
  if (cfg.embedding_source == EmbeddingSource::kImport) {
    if (cfg.embeddings_path.empty()) out.push_back("embeddings.path is required when embeddings.source = import");
    else if (!fs::exists(cfg.embeddings_path, ec)) {
      out.push_back("embedding file " + cfg.embeddings_path.string() + " does not exist");
    }
  } else {
    if (cfg.native.context_vocab_size < 2) out.push_back("native.context_vocab_size must be at least 2");
    if (cfg.native.window == 0) out.push_back("native.window must be positive");
    if (!(cfg.native.ppmi_shift >= 0.0)) out.push_back("native.ppmi_shift must be >= 0");
  }
  if (cfg.neighbor_k == 0) out.push_back("drift.neighbors must be positive");
  for (auto& v : cfg.ap.violations()) out.push_back(std::move(v));
  if (cfg.min_cluster_size == 0) out.push_back("filter.min_size must be positive");
  if (cfg.lda_enabled) {
    for (auto& v : cfg.lda.violations()) out.push_back(std::move(v));
    if (cfg.lda_top_n == 0) out.push_back("lda.top_n must be positive");
  }
  if (cfg.report_top_k == 0) out.push_back("report.top_k must be positive");
  if (cfg.out_dir.empty()) out.push_back("output directory is required");
  return out;
}

// --- lock ------------------------------------------------------------------

OutputLock::OutputLock(const fs::path& out_dir) : path_(out_dir / artifact::kLock) {
  fs::create_directories(out_dir);
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f) {
    const int err = errno;
    if (err == EEXIST) {
      throw Error("output directory " + out_dir.string() +
                  " is in use by another run (remove " + path_.string() + " if it is stale)");
    }
    throw Error("cannot create lock file " + path_.string() + ": " + std::strerror(err));
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// --- stages ----------------------------------------------------------------

namespace {

fs::path out_file(const RunConfig& cfg, std::string_view name) { return cfg.out_dir / name; }

template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(stage), e.what());
  }
}

VocabularyConfig vocabulary_config(const RunConfig& cfg) {
  VocabularyConfig vc;
  vc.min_frequency = cfg.min_frequency;
  vc.min_length = cfg.min_length;
  vc.min_frames = cfg.min_frames;
  if (cfg.stopwords_path) vc.stopwords = load_word_list(*cfg.stopwords_path);
  if (cfg.allowlist_path) vc.pos_allowlist = load_word_list(*cfg.allowlist_path);
  return vc;
}

EmbeddingStore load_store(const RunConfig& cfg, const Vocabulary& vocab) {
  EmbeddingStore store = import_embeddings(out_file(cfg, artifact::kEmbeddings));
  if (store.frame_count() != vocab.frame_count()) {
    throw Error("embedding store has " + std::to_string(store.frame_count()) +
                " frames but the vocabulary has " + std::to_string(vocab.frame_count()));
  }
  return store;
}

}  // namespace

void stage_ingest(const RunConfig& cfg) {
  in_stage("ingest", [&] {
    const TimeFramePlan plan(cfg.frames);
    const SlicedCorpus corpus = ingest(cfg.corpus_path, plan, cfg.corpus_format);
    write_corpus(corpus, out_file(cfg, artifact::kCorpus));
  });
}

void stage_vocab(const RunConfig& cfg) {
  in_stage("vocab", [&] {
    const SlicedCorpus corpus = read_corpus(out_file(cfg, artifact::kCorpus));
    const Vocabulary vocab = build_vocabulary(corpus, vocabulary_config(cfg));
    write_vocabulary(vocab, out_file(cfg, artifact::kVocabulary));
  });
}

void stage_embed(const RunConfig& cfg) {
  in_stage(cfg.embedding_source == EmbeddingSource::kNative ? "embed" : "import-embeddings", [&] {
    const Vocabulary vocab = read_vocabulary(out_file(cfg, artifact::kVocabulary));
    EmbeddingStore store;
    if (cfg.embedding_source == EmbeddingSource::kNative) {
      const SlicedCorpus corpus = read_corpus(out_file(cfg, artifact::kCorpus));
      store = compute_native_embeddings(corpus, vocab, cfg.native);
    } else {
      store = import_embeddings(cfg.embeddings_path);
      std::vector<std::string> labels;
      for (const auto& f : cfg.frames) labels.push_back(f.label);
      if (store.frame_labels() != labels) {
        throw Error("imported embeddings declare frames '" + [&] {
          std::string s;
          for (const auto& l : store.frame_labels()) s += (s.empty() ? "" : ",") + l;
          return s;
        }() + "' which do not match the configured time frame plan");
      }
      store.retain_vocabulary(vocab);
    }
    export_embeddings(store, out_file(cfg, artifact::kEmbeddings));
  });
}

void stage_drift(const RunConfig& cfg) {
  in_stage("drift", [&] {
    const Vocabulary vocab = read_vocabulary(out_file(cfg, artifact::kVocabulary));
    const EmbeddingStore store = load_store(cfg, vocab);
    const ChangeScores scores = semantic_change_scores(store, vocab, cfg.first(), cfg.last());

    DriftArtifact drift;
    drift.first = cfg.first();
    drift.last = cfg.last();
    drift.missing_words = scores.missing_words;
    drift.scores = scores.reports;

    std::vector<std::string> targets = cfg.movement_words;
    if (targets.empty()) {
      for (std::size_t i = 0; i < std::min(cfg.report_top_k, scores.reports.size()); ++i) {
        targets.push_back(scores.reports[i].word);
      }
    }
    if (vocab.size() >= 2) {
      const std::size_t k = std::min(cfg.neighbor_k, vocab.size() - 1);
      for (const auto& w : targets) {
        drift.movements.push_back(
            movement_neighbors(w, store, vocab, k, cfg.first(), cfg.last(), cfg.neighbor_direction));
      }
    }
    write_drift(drift, out_file(cfg, artifact::kDrift));
    write_text_file(out_file(cfg, artifact::kDriftMarkdown), drift_markdown(drift, cfg.report_top_k));
  });
}

void stage_cluster(const RunConfig& cfg) {
  in_stage("cluster", [&] {
    const Vocabulary vocab = read_vocabulary(out_file(cfg, artifact::kVocabulary));
    const EmbeddingStore store = load_store(cfg, vocab);
    const auto diffs = difference_vectors(store, vocab, cfg.first(), cfg.last());
    APResult fit;
    const auto clusters = cluster_drift(diffs, cfg.ap, &fit);
    FilterSummary fs_summary;
    const auto kept = filter_clusters(clusters, diffs, cfg.min_cluster_size, &fs_summary);

    ClusterSummary summary;
    summary.clusters_before = clusters.size();
    summary.clusters_after = kept.size();
    summary.clustered_words = diffs.size();
    summary.words_removed = fs_summary.words_removed;
    summary.q1 = fs_summary.q1;
    summary.ap_iterations = fit.iterations;
    summary.ap_converged = fit.converged;
    summary.ap_preference = fit.preference;
    summary.min_size = cfg.min_cluster_size;
    write_clusters(clusters, out_file(cfg, artifact::kClustersAll));
    write_clusters(kept, out_file(cfg, artifact::kClusters));
    write_cluster_summary(summary, out_file(cfg, artifact::kClusterSummary));
  });
}

void stage_rank(const RunConfig& cfg) {
  in_stage("rank", [&] {
    const SlicedCorpus corpus = read_corpus(out_file(cfg, artifact::kCorpus));
    const auto clusters = read_clusters(out_file(cfg, artifact::kClusters));
    const auto scores = rank_clusters(clusters, corpus, cfg.first(), cfg.last(), cfg.emd_mode);
    write_scores(scores, out_file(cfg, artifact::kScores));
    write_text_file(out_file(cfg, artifact::kScoresMarkdown), scores_markdown(scores));
  });
}

void stage_lda(const RunConfig& cfg) {
  in_stage("lda-baseline", [&] {
    const SlicedCorpus corpus = read_corpus(out_file(cfg, artifact::kCorpus));
    const LdaInput input = lda_input(corpus, cfg.first(), cfg.last());
    LdaConfig lc = cfg.lda;
    lc.seed = cfg.seed;
    const LdaModel model = lda_fit(input.docs, lc);
    const auto shifts = topic_shift_ranking(model, input.frame_of, cfg.first(), cfg.last(), cfg.lda_top_n);
    std::vector<LdaTopicRow> rows;
    for (const auto& s : shifts) {
      rows.push_back(LdaTopicRow{s.topic, model.top_words(s.topic, 10), s.importance_first,
                                 s.importance_last, s.gain});
    }
    write_lda(rows, out_file(cfg, artifact::kLda));
  });
}

// --- report ----------------------------------------------------------------

namespace {

json change_json(const std::vector<ChangeReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back(json{{"word", r.word}, {"similarity", r.similarity}, {"rank", r.rank}});
  }
  return arr;
}

json words_json(const std::vector<ScoredWord>& words) {
  json arr = json::array();
  for (const auto& w : words) arr.push_back(json{{"word", w.word}, {"score", w.score}});
  return arr;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i];
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string RunReport::to_json() const {
  json j;
  json c = json::object();
  for (const auto& [k, v] : config) c[k] = v;
  j["config"] = std::move(c);
  json counts;
  json frames = json::array();
  for (std::size_t i = 0; i < frame_labels.size(); ++i) {
    frames.push_back(json{{"label", frame_labels[i]},
                          {"documents", i < documents_per_frame.size() ? documents_per_frame[i] : 0}});
  }
  counts["frames"] = std::move(frames);
  counts["excluded_records"] = excluded_records;
  counts["vocabulary_size"] = vocabulary_size;
  counts["embedding_rows"] = embedding_rows;
  counts["scored_words"] = scored_words;
  counts["words_missing_a_boundary_frame"] = missing_words;
  counts["clusters_before_filter"] = clusters.clusters_before;
  counts["clusters_after_filter"] = clusters.clusters_after;
  counts["words_removed_below_q1"] = clusters.words_removed;
  j["counts"] = std::move(counts);
  j["clustering"] = json{{"ap_iterations", clusters.ap_iterations},
                         {"ap_converged", clusters.ap_converged},
                         {"ap_preference", clusters.ap_preference},
                         {"magnitude_q1", clusters.q1}};
  j["most_changed"] = change_json(most_changed);
  j["least_changed"] = change_json(least_changed);
  json moves = json::array();
  for (const auto& m : movements) {
    moves.push_back(json{{"word", m.word},
                         {"no_significant_drift", m.no_significant_drift},
                         {"diverted_from", words_json(m.diverted_from)},
                         {"moved_to", words_json(m.moved_to)}});
  }
  j["movements"] = std::move(moves);
  json top = json::array();
  for (const auto& s : top_clusters) {
    top.push_back(json{{"rank", s.rank},
                       {"emd", s.emd},
                       {"exemplar", s.cluster.exemplar},
                       {"members", s.cluster.members},
                       {"hist_first", s.hist_first.bins},
                       {"hist_last", s.hist_last.bins}});
  }
  j["top_clusters"] = std::move(top);
  if (lda) {
    json rows = json::array();
    for (const auto& r : *lda) {
      rows.push_back(json{{"topic", r.topic},
                          {"top_words", r.top_words},
                          {"importance_first", r.importance_first},
                          {"importance_last", r.importance_last},
                          {"gain", r.gain}});
    }
    j["lda_baseline"] = std::move(rows);
  }
  json resolved = json::object();
  for (const auto& [k, v] : resolved_defaults) resolved[k] = v;
  j["resolved_defaults"] = std::move(resolved);
  return j.dump(2) + '\n';
}

std::string RunReport::to_markdown() const {
  std::string out = "# Change summary\n\n## Corpus\n\n| Frame | Documents |\n|---|---:|\n";
  for (std::size_t i = 0; i < frame_labels.size(); ++i) {
    out += "| " + frame_labels[i] + " | " +
           std::to_string(i < documents_per_frame.size() ? documents_per_frame[i] : 0) + " |\n";
  }
  out += "\nExcluded records: " + std::to_string(excluded_records) +
         ". Vocabulary: " + std::to_string(vocabulary_size) +
         " words. Scored words: " + std::to_string(scored_words) +
         ". Clusters: " + std::to_string(clusters.clusters_before) + " before filtering, " +
         std::to_string(clusters.clusters_after) + " after.\n";

  out += "\n## Overall change\n\n| Terms | Smallest Similarity | Terms | Highest Similarity |\n|---|---:|---|---:|\n";
  const std::size_t rows = std::max(most_changed.size(), least_changed.size());
  for (std::size_t i = 0; i < rows; ++i) {
    out += "| ";
    out += i < most_changed.size() ? most_changed[i].word + " | " + fixed(most_changed[i].similarity, 4) : " | ";
    out += " | ";
    out += i < least_changed.size() ? least_changed[i].word + " | " + fixed(least_changed[i].similarity, 4) : " | ";
    out += " |\n";
  }

  if (!movements.empty()) {
    out += "\n## Word movement\n\n| Terms | Diverted From | Moved To |\n|---|---|---|\n";
    for (const auto& m : movements) {
      std::vector<std::string> from, to;
      for (const auto& w : m.diverted_from) from.push_back(w.word);
      for (const auto& w : m.moved_to) to.push_back(w.word);
      out += "| " + m.word + " | " +
             (m.no_significant_drift ? std::string("(no significant drift)") : join_words(from)) +
             " | " + join_words(to) + " |\n";
    }
  }

  out += "\n## Top-ranked clusters\n\n| Rank | Value | Terms |\n|---:|---:|---|\n";
  for (const auto& s : top_clusters) {
    out += "| " + std::to_string(s.rank) + " | " + fixed(s.emd, 2) + " | " +
           join_words(s.cluster.members) + " |\n";
  }

  if (lda) {
    out += "\n## LDA baseline\n\n| Topic | Gain | Top words |\n|---:|---:|---|\n";
    for (const auto& r : *lda) {
      out += "| " + std::to_string(r.topic) + " | " + fixed(r.gain, 4) + " | " +
             join_words(r.top_words) + " |\n";
    }
  }

  out += "\n## Resolved defaults\n\n";
  for (const auto& [k, v] : resolved_defaults) out += "- " + k + ": " + v + "\n";
  return out;
}

RunReport stage_report(const RunConfig& cfg) {
  return in_stage("report", [&] {
    RunReport report;
    report.config = config_settings(cfg);

    const SlicedCorpus corpus = read_corpus(out_file(cfg, artifact::kCorpus));
    report.frame_labels = corpus.plan().labels();
    report.documents_per_frame = corpus.documents_per_frame();
    report.excluded_records = corpus.excluded_records();

    const Vocabulary vocab = read_vocabulary(out_file(cfg, artifact::kVocabulary));
    report.vocabulary_size = vocab.size();
    report.embedding_rows = load_store(cfg, vocab).size();

    const DriftArtifact drift = read_drift(out_file(cfg, artifact::kDrift));
    report.scored_words = drift.scores.size();
    report.missing_words = drift.missing_words;
    const std::size_t k = std::min(cfg.report_top_k, drift.scores.size());
    report.most_changed.assign(drift.scores.begin(), drift.scores.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) report.least_changed.push_back(drift.scores[drift.scores.size() - 1 - i]);
    report.movements = drift.movements;

    report.clusters = read_cluster_summary(out_file(cfg, artifact::kClusterSummary));
    auto scores = read_scores(out_file(cfg, artifact::kScores));
    if (scores.size() > cfg.report_top_k) scores.resize(cfg.report_top_k);
    report.top_clusters = std::move(scores);

    if (cfg.lda_enabled) report.lda = read_lda(out_file(cfg, artifact::kLda));

    auto& r = report.resolved_defaults;
    r.emplace_back("tokenizer", "ASCII letters with internal hyphens, lowercased; sentences end at . ! ? before whitespace");
    r.emplace_back("stopwords", cfg.stopwords_path ? cfg.stopwords_path->string() : "none");
    r.emplace_back("noun_filter", cfg.allowlist_path ? "allowlist " + cfg.allowlist_path->string() : "none");
    r.emplace_back("embeddings", cfg.embedding_source == EmbeddingSource::kNative
                                     ? "native PPMI over a shared context vocabulary"
                                     : "imported interchange file " + cfg.embeddings_path.string());
    r.emplace_back("difference_vector", "u_first - u_last");
    r.emplace_back("neighbor_direction", cfg.neighbor_direction == DriftDirection::kOldToNew
                                              ? "u_last - u_first scored against first-frame vectors"
                                              : "u_first - u_last scored against first-frame vectors");
    r.emplace_back("ap_similarity", "negative squared Euclidean distance between difference vectors");
    r.emplace_back("ap_preference", cfg.ap.preference ? shortest(*cfg.ap.preference)
                                                      : "median of off-diagonal similarities");
    r.emplace_back("filter_order", "drop members with magnitude < Q1 (linear interpolation), then clusters below min_size");
    r.emplace_back("emd_mode", std::string(to_string(cfg.emd_mode)));
    r.emplace_back("histogram", "distinct cluster words per sentence, bins 1..10, 10 holds >= 10");
    if (cfg.lda_enabled) {
      r.emplace_back("lda_inference", "collapsed Gibbs sampling, alpha=" + shortest(cfg.lda.resolved_alpha()) +
                                          ", beta=" + shortest(cfg.lda.beta));
      r.emplace_back("lda_importance", "mean document-topic proportion per frame");
    }

    write_text_file(out_file(cfg, artifact::kReport), report.to_json());
    write_text_file(out_file(cfg, artifact::kReportMarkdown), report.to_markdown());
    return report;
  });
}

RunReport run(const RunConfig& cfg) {
  if (auto problems = validate(cfg); !problems.empty()) throw ValidationError(std::move(problems));
  OutputLock lock(cfg.out_dir);

  std::vector<StageTiming> timing;
  auto timed = [&](std::string name, const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    timing.push_back({std::move(name), elapsed.count()});
  };

  write_text_file(out_file(cfg, artifact::kConfig), config_text(cfg));
  timed("ingest", [&] { stage_ingest(cfg); });
  timed("vocab", [&] { stage_vocab(cfg); });
  timed("embed", [&] { stage_embed(cfg); });
  timed("drift", [&] { stage_drift(cfg); });
  timed("cluster", [&] { stage_cluster(cfg); });
  timed("rank", [&] { stage_rank(cfg); });
  if (cfg.lda_enabled) timed("lda-baseline", [&] { stage_lda(cfg); });
  RunReport report;
  timed("report", [&] { report = stage_report(cfg); });
  report.timing = timing;

  json t = json::array();
  for (const auto& s : timing) t.push_back(json{{"stage", s.stage}, {"seconds", s.seconds}});
  write_text_file(out_file(cfg, artifact::kTiming), t.dump(2) + '\n');
  return report;
}

}  // namespace driftscope
