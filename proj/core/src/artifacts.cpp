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

#include "driftscope/artifacts.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "driftscope/error.hpp"
#include "text_util.hpp"

namespace driftscope {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("failed while writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

json parse_json_file(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

template <typename Fn>
auto with_context(const fs::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": unexpected structure: " + e.what());
  }
}

}  // namespace

// --- corpus ----------------------------------------------------------------

void write_corpus(const SlicedCorpus& corpus, const fs::path& path) {
  std::string out;
  json header;
  header["format"] = "driftscope-corpus";
  header["version"] = 1;
  header["plan"] = corpus.plan().to_string();
  header["excluded"] = corpus.excluded_records();
  out += header.dump() + '\n';
  for (const auto& doc : corpus.documents()) {
    json j;
    j["id"] = doc.id;
    j["year"] = doc.year;
    j["frame"] = doc.frame_index;
    j["sentences"] = doc.sentences;
    out += j.dump() + '\n';
  }
  write_text_file(path, out);
}

SlicedCorpus read_corpus(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus artifact " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::optional<TimeFramePlan> plan;
  std::size_t excluded = 0;
  std::vector<Document> docs;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
      if (!plan) {
        if (j.value("format", "") != "driftscope-corpus") {
          throw FormatError(where + ": not a driftscope corpus artifact");
        }
        plan = TimeFramePlan::parse(j.at("plan").get<std::string>());
        excluded = j.at("excluded").get<std::size_t>();
        continue;
      }
      docs.push_back(Document{j.at("id").get<std::string>(), j.at("year").get<int>(),
                              j.at("frame").get<std::size_t>(),
                              j.at("sentences").get<std::vector<Sentence>>()});
    } catch (const json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  if (!plan) throw FormatError(path.string() + ": missing corpus header");
  return SlicedCorpus(std::move(*plan), std::move(docs), excluded);
}

// --- vocabulary ------------------------------------------------------------

void write_vocabulary(const Vocabulary& vocab, const fs::path& path) {
  std::string out = "#driftscope-vocabulary\tv1\tframes=" + std::to_string(vocab.frame_count()) + "\n";
  for (const auto& [word, e] : vocab.entries()) {
    out += word + '\t' + std::to_string(e.total_frequency) + '\t' +
           std::to_string(e.frame_presence_count) + '\t';
    for (std::size_t i = 0; i < e.per_frame_frequency.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(e.per_frame_frequency[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

Vocabulary read_vocabulary(const fs::path& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("#driftscope-vocabulary\tv1\tframes=", 0) != 0) {
    throw FormatError(path.string() + ":1: expected vocabulary header");
  }
  std::size_t frames = 0;
  if (!detail::parse_number(std::string_view(line).substr(line.find('=') + 1), frames)) {
    throw FormatError(path.string() + ":1: invalid frame count");
  }
  std::map<std::string, VocabularyEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    auto fields = detail::split(line, '\t');
    VocabularyEntry e;
    if (fields.size() != 4 || !detail::parse_number(fields[1], e.total_frequency) ||
        !detail::parse_number(fields[2], e.frame_presence_count)) {
      throw FormatError(where + ": malformed vocabulary row");
    }
    for (auto c : detail::split(fields[3], ',')) {
      std::uint64_t v = 0;
      if (!detail::parse_number(c, v)) throw FormatError(where + ": malformed frame count");
      e.per_frame_frequency.push_back(v);
    }
    if (e.per_frame_frequency.size() != frames) {
      throw FormatError(where + ": expected " + std::to_string(frames) + " frame counts");
    }
    entries.emplace(std::string(fields[0]), std::move(e));
  }
  return Vocabulary(frames, std::move(entries));
}

// --- clusters --------------------------------------------------------------

namespace {

json cluster_json(const Cluster& c) {
  json j;
  j["id"] = c.id;
  j["exemplar"] = c.exemplar;
  j["members"] = c.members;
  return j;
}

json histogram_json(const CooccurrenceHistogram& h) {
  json j;
  j["bins"] = h.bins;
  j["total_sentences"] = h.total_sentences;
  return j;
}

CooccurrenceHistogram histogram_from(const json& j) {
  CooccurrenceHistogram h;
  h.bins = j.at("bins").get<std::array<std::uint64_t, kHistogramBins>>();
  h.total_sentences = j.at("total_sentences").get<std::uint64_t>();
  return h;
}

}  // namespace

void write_clusters(const std::vector<Cluster>& clusters, const fs::path& path) {
  json arr = json::array();
  for (const auto& c : clusters) arr.push_back(cluster_json(c));
  write_text_file(path, arr.dump(2) + '\n');
}

std::vector<Cluster> read_clusters(const fs::path& path) {
  const json arr = parse_json_file(path);
  return with_context(path, [&] {
    std::vector<Cluster> out;
    for (const auto& j : arr) {
      out.push_back(Cluster{j.at("id").get<std::size_t>(), j.at("exemplar").get<std::string>(),
                            j.at("members").get<std::vector<std::string>>()});
    }
    return out;
  });
}

void write_cluster_summary(const ClusterSummary& s, const fs::path& path) {
  json j;
  j["clusters_before_filter"] = s.clusters_before;
  j["clusters_after_filter"] = s.clusters_after;
  j["clustered_words"] = s.clustered_words;
  j["words_removed_below_q1"] = s.words_removed;
  j["magnitude_q1"] = s.q1;
  j["min_size"] = s.min_size;
  j["ap_iterations"] = s.ap_iterations;
  j["ap_converged"] = s.ap_converged;
  j["ap_preference"] = s.ap_preference;
  write_text_file(path, j.dump(2) + '\n');
}

ClusterSummary read_cluster_summary(const fs::path& path) {
  const json j = parse_json_file(path);
  return with_context(path, [&] {
    ClusterSummary s;
    s.clusters_before = j.at("clusters_before_filter").get<std::size_t>();
    s.clusters_after = j.at("clusters_after_filter").get<std::size_t>();
    s.clustered_words = j.at("clustered_words").get<std::size_t>();
    s.words_removed = j.at("words_removed_below_q1").get<std::size_t>();
    s.q1 = j.at("magnitude_q1").get<double>();
    s.min_size = j.at("min_size").get<std::size_t>();
    s.ap_iterations = j.at("ap_iterations").get<std::size_t>();
    s.ap_converged = j.at("ap_converged").get<bool>();
    s.ap_preference = j.at("ap_preference").get<double>();
    return s;
  });
}

// --- scores ----------------------------------------------------------------

void write_scores(const std::vector<ClusterScore>& scores, const fs::path& path) {
  json arr = json::array();
  for (const auto& s : scores) {
    json j;
    j["rank"] = s.rank;
    j["emd"] = s.emd;
    j["id"] = s.cluster.id;
    j["exemplar"] = s.cluster.exemplar;
    j["members"] = s.cluster.members;
    j["hist_first"] = histogram_json(s.hist_first);
    j["hist_last"] = histogram_json(s.hist_last);
    arr.push_back(std::move(j));
  }
  write_text_file(path, arr.dump(2) + '\n');
}

std::vector<ClusterScore> read_scores(const fs::path& path) {
  const json arr = parse_json_file(path);
  return with_context(path, [&] {
    std::vector<ClusterScore> out;
    for (const auto& j : arr) {
      ClusterScore s;
      s.rank = j.at("rank").get<std::size_t>();
      s.emd = j.at("emd").get<double>();
      s.cluster.id = j.at("id").get<std::size_t>();
      s.cluster.exemplar = j.at("exemplar").get<std::string>();
      s.cluster.members = j.at("members").get<std::vector<std::string>>();
      s.hist_first = histogram_from(j.at("hist_first"));
      s.hist_last = histogram_from(j.at("hist_last"));
      out.push_back(std::move(s));
    }
    return out;
  });
}

namespace {

std::string join(const std::vector<std::string>& words, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string scores_markdown(const std::vector<ClusterScore>& scores) {
  std::string out = "| Rank | Value | Terms |\n|---:|---:|---|\n";
  for (const auto& s : scores) {
    out += "| " + std::to_string(s.rank) + " | " + fixed(s.emd, 2) + " | " +
           join(s.cluster.members, ", ") + " |\n";
  }
  return out;
}

// --- drift -----------------------------------------------------------------

namespace {

json scored_json(const std::vector<ScoredWord>& words) {
  json arr = json::array();
  for (const auto& w : words) arr.push_back(json{{"word", w.word}, {"score", w.score}});
  return arr;
}

std::vector<ScoredWord> scored_from(const json& arr) {
  std::vector<ScoredWord> out;
  for (const auto& j : arr) out.push_back({j.at("word").get<std::string>(), j.at("score").get<double>()});
  return out;
}

std::vector<std::string> words_of(const std::vector<ScoredWord>& scored) {
  std::vector<std::string> out;
  for (const auto& s : scored) out.push_back(s.word);
  return out;
}

}  // namespace

void write_drift(const DriftArtifact& drift, const fs::path& path) {
  json j;
  j["first"] = drift.first;
  j["last"] = drift.last;
  j["missing_words"] = drift.missing_words;
  json scores = json::array();
  for (const auto& r : drift.scores) {
    scores.push_back(json{{"word", r.word}, {"similarity", r.similarity}, {"rank", r.rank}});
  }
  j["scores"] = std::move(scores);
  json neighbors = json::array();
  for (const auto& m : drift.movements) {
    json n;
    n["word"] = m.word;
    n["no_significant_drift"] = m.no_significant_drift;
    n["moved_to"] = scored_json(m.moved_to);
    n["diverted_from"] = scored_json(m.diverted_from);
    neighbors.push_back(std::move(n));
  }
  j["neighbors"] = std::move(neighbors);
  write_text_file(path, j.dump(2) + '\n');
}

DriftArtifact read_drift(const fs::path& path) {
  const json j = parse_json_file(path);
  return with_context(path, [&] {
    DriftArtifact d;
    d.first = j.at("first").get<std::size_t>();
    d.last = j.at("last").get<std::size_t>();
    d.missing_words = j.at("missing_words").get<std::size_t>();
    for (const auto& r : j.at("scores")) {
      d.scores.push_back({r.at("word").get<std::string>(), r.at("similarity").get<double>(),
                          r.at("rank").get<std::size_t>()});
    }
    for (const auto& n : j.at("neighbors")) {
      MovementReport m;
      m.word = n.at("word").get<std::string>();
      m.no_significant_drift = n.at("no_significant_drift").get<bool>();
      m.moved_to = scored_from(n.at("moved_to"));
      m.diverted_from = scored_from(n.at("diverted_from"));
      d.movements.push_back(std::move(m));
    }
    return d;
  });
}

std::string drift_markdown(const DriftArtifact& drift, std::size_t top_k) {
  const std::size_t n = std::min(top_k, drift.scores.size());
  std::string out = "| Terms | Smallest Similarity | Terms | Highest Similarity |\n|---|---:|---|---:|\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& low = drift.scores[i];
    const auto& high = drift.scores[drift.scores.size() - 1 - i];
    out += "| " + low.word + " | " + fixed(low.similarity, 4) + " | " + high.word + " | " +
           fixed(high.similarity, 4) + " |\n";
  }
  if (!drift.movements.empty()) {
    out += "\n| Terms | Diverted From | Moved To |\n|---|---|---|\n";
    for (const auto& m : drift.movements) {
      if (m.no_significant_drift) {
        out += "| " + m.word + " | (no significant drift) | |\n";
      } else {
        out += "| " + m.word + " | " + join(words_of(m.diverted_from), ", ") + " | " +
               join(words_of(m.moved_to), ", ") + " |\n";
      }
    }
  }
  return out;
}

// --- lda -------------------------------------------------------------------

void write_lda(const std::vector<LdaTopicRow>& rows, const fs::path& path) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j;
    j["topic"] = r.topic;
    j["top_words"] = r.top_words;
    j["importance_first"] = r.importance_first;
    j["importance_last"] = r.importance_last;
    j["gain"] = r.gain;
    arr.push_back(std::move(j));
  }
  write_text_file(path, arr.dump(2) + '\n');
}

std::vector<LdaTopicRow> read_lda(const fs::path& path) {
  const json arr = parse_json_file(path);
  return with_context(path, [&] {
    std::vector<LdaTopicRow> out;
    for (const auto& j : arr) {
      out.push_back(LdaTopicRow{j.at("topic").get<std::size_t>(),
                                j.at("top_words").get<std::vector<std::string>>(),
                                j.at("importance_first").get<double>(),
                                j.at("importance_last").get<double>(), j.at("gain").get<double>()});
    }
    return out;
  });
}

}  // namespace driftscope
