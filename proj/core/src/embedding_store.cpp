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

#include "driftscope/embedding_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "driftscope/error.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace driftscope {

namespace fs = std::filesystem;

EmbeddingStore::EmbeddingStore(std::size_t dim, std::vector<std::string> frame_labels,
                               Provenance provenance, std::string source)
    : dim_(dim),
      frame_labels_(std::move(frame_labels)),
      provenance_(provenance),
      source_(std::move(source)) {
  if (dim_ == 0) throw InvalidArgument("embedding dimension must be positive");
}

void EmbeddingStore::insert(std::string word, std::size_t frame, EmbeddingRecord record) {
  if (word.empty()) throw InvalidArgument("embedding row with an empty word");
  if (record.vector.size() != dim_) {
    throw InvalidArgument("vector for ('" + word + "', " + std::to_string(frame) + ") has " +
                          std::to_string(record.vector.size()) + " components, expected " +
                          std::to_string(dim_));
  }
  if (frame >= frame_labels_.size()) {
    throw InvalidArgument("frame index " + std::to_string(frame) + " for '" + word +
                          "' is outside the " + std::to_string(frame_labels_.size()) +
                          " declared frames");
  }
  if (record.occurrence_count == 0) {
    throw InvalidArgument("occurrence count for ('" + word + "', " + std::to_string(frame) +
                          ") must be at least 1");
  }
  for (double v : record.vector) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("non-finite component in vector for ('" + word + "', " +
                            std::to_string(frame) + ")");
    }
  }
  Key key{word, frame};
  auto [it, inserted] = records_.try_emplace(std::move(key), std::move(record));
  if (!inserted) {
    throw InvalidArgument("duplicate embedding row for ('" + it->first.first + "', " +
                          std::to_string(frame) + ")");
  }
}

const EmbeddingRecord* EmbeddingStore::find(std::string_view word, std::size_t frame) const {
  auto it = records_.find(std::pair<std::string_view, std::size_t>(word, frame));
  return it == records_.end() ? nullptr : &it->second;
}

std::optional<std::span<const double>> EmbeddingStore::get(std::string_view word,
                                                           std::size_t frame) const {
  const auto* rec = find(word, frame);
  if (!rec) return std::nullopt;
  return std::span<const double>(rec->vector);
}

bool EmbeddingStore::is_zero(std::string_view word, std::size_t frame) const {
  const auto* rec = find(word, frame);
  return rec && std::all_of(rec->vector.begin(), rec->vector.end(),
                            [](double v) { return v == 0.0; });
}

std::size_t EmbeddingStore::zero_row_count() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& kv) {
    const auto& v = kv.second.vector;
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  }));
}

void EmbeddingStore::set_axis_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != dim_) {
    throw InvalidArgument("axis label count " + std::to_string(labels.size()) +
                          " does not match dimension " + std::to_string(dim_));
  }
  axis_labels_ = std::move(labels);
}

std::size_t EmbeddingStore::retain_vocabulary(const Vocabulary& vocab) {
  std::size_t dropped = 0;
  for (auto it = records_.begin(); it != records_.end();) {
    if (!vocab.contains(it->first.first)) {
      it = records_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

// --- native embedder -------------------------------------------------------

namespace {

using CountRow = std::unordered_map<std::uint32_t, std::uint64_t>;

struct FrameCounts {
  std::vector<CountRow> rows;                // target index -> context index -> count
  std::vector<std::uint64_t> occurrences;    // target index -> token count
};

}  // namespace

EmbeddingStore compute_native_embeddings(const SlicedCorpus& corpus, const Vocabulary& vocab,
                                         const NativeEmbeddingConfig& cfg) {
  if (vocab.frame_count() != corpus.plan().size()) {
    throw InvalidArgument("vocabulary has " + std::to_string(vocab.frame_count()) +
                          " frames but the corpus has " + std::to_string(corpus.plan().size()));
  }
  if (cfg.window == 0) throw InvalidArgument("co-occurrence window must be positive");
  if (!(cfg.ppmi_shift >= 0.0) || !std::isfinite(cfg.ppmi_shift)) {
    throw InvalidArgument("PPMI shift must be a finite value >= 0");
  }

  std::vector<std::string> by_freq = vocab.words();
  std::stable_sort(by_freq.begin(), by_freq.end(), [&](const auto& a, const auto& b) {
    return vocab.at(a).total_frequency > vocab.at(b).total_frequency;
  });
  by_freq.resize(std::min(by_freq.size(), cfg.context_vocab_size));
  if (by_freq.size() < 2) {
    throw InvalidArgument("context vocabulary has " + std::to_string(by_freq.size()) +
                          " words; at least 2 are required");
  }
  // Axes are ordered by frequency rank.
  const std::vector<std::string>& context_words = by_freq;
  std::unordered_map<std::string_view, std::uint32_t> context_index;
  for (std::size_t i = 0; i < context_words.size(); ++i) {
    context_index.emplace(context_words[i], static_cast<std::uint32_t>(i));
  }
  std::unordered_map<std::string_view, std::uint32_t> target_index;
  for (std::size_t i = 0; i < vocab.words().size(); ++i) {
    target_index.emplace(vocab.words()[i], static_cast<std::uint32_t>(i));
  }

  const std::size_t frames = corpus.plan().size();
  const std::size_t targets = vocab.size();
  const auto& docs = corpus.documents();
  const std::size_t workers = detail::resolve_workers(cfg.workers);

  auto new_table = [&] {
    std::vector<FrameCounts> table(frames);
    for (auto& f : table) {
      f.rows.resize(targets);
      f.occurrences.assign(targets, 0);
    }
    return table;
  };

  std::vector<std::vector<FrameCounts>> partial(std::max<std::size_t>(1, std::min(workers, docs.size())));
  detail::parallel_chunks(docs.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    auto table = new_table();
    std::vector<std::int64_t> ctx_ids;
    std::vector<std::int64_t> tgt_ids;
    for (std::size_t d = begin; d < end; ++d) {
      auto& frame = table[docs[d].frame_index];
      for (const auto& sentence : docs[d].sentences) {
        ctx_ids.assign(sentence.size(), -1);
        tgt_ids.assign(sentence.size(), -1);
        for (std::size_t i = 0; i < sentence.size(); ++i) {
          if (auto it = context_index.find(sentence[i]); it != context_index.end()) ctx_ids[i] = it->second;
          if (auto it = target_index.find(sentence[i]); it != target_index.end()) tgt_ids[i] = it->second;
        }
        for (std::size_t i = 0; i < sentence.size(); ++i) {
          if (tgt_ids[i] < 0) continue;
          const auto t = static_cast<std::size_t>(tgt_ids[i]);
          ++frame.occurrences[t];
          const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
          const std::size_t hi = std::min(sentence.size(), i + cfg.window + 1);
          for (std::size_t j = lo; j < hi; ++j) {
            if (j == i || ctx_ids[j] < 0) continue;
            ++frame.rows[t][static_cast<std::uint32_t>(ctx_ids[j])];
          }
        }
      }
    }
    partial[w] = std::move(table);
  });

  // Merge partial tables. Integer sums make the result independent of the
  // worker count.
  std::vector<FrameCounts> merged = std::move(partial[0]);
  if (merged.empty()) merged = new_table();
  for (std::size_t w = 1; w < partial.size(); ++w) {
    for (std::size_t f = 0; f < frames; ++f) {
      for (std::size_t t = 0; t < targets; ++t) {
        merged[f].occurrences[t] += partial[w][f].occurrences[t];
        for (const auto& [c, n] : partial[w][f].rows[t]) merged[f].rows[t][c] += n;
      }
    }
  }

  const std::size_t dim = context_words.size();
  EmbeddingStore store(dim, corpus.plan().labels(), Provenance::kNative,
                       "native PPMI (context=" + std::to_string(dim) +
                           ", window=" + std::to_string(cfg.window) +
                           ", shift=" + detail::format_g9(cfg.ppmi_shift) + ")");
  store.set_axis_labels(context_words);

  for (std::size_t f = 0; f < frames; ++f) {
    const auto& table = merged[f];
    std::vector<std::uint64_t> row_sum(targets, 0);
    std::vector<std::uint64_t> col_sum(dim, 0);
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < targets; ++t) {
      for (const auto& [c, n] : table.rows[t]) {
        row_sum[t] += n;
        col_sum[c] += n;
        total += n;
      }
    }
    for (std::size_t t = 0; t < targets; ++t) {
      if (table.occurrences[t] == 0) continue;
      EmbeddingRecord rec;
      rec.occurrence_count = table.occurrences[t];
      rec.vector.assign(dim, 0.0);
      for (const auto& [c, n] : table.rows[t]) {
        const double pmi = std::log(static_cast<double>(n)) + std::log(static_cast<double>(total)) -
                           std::log(static_cast<double>(row_sum[t])) -
                           std::log(static_cast<double>(col_sum[c]));
        rec.vector[c] = std::max(0.0, pmi - cfg.ppmi_shift);
      }
      store.insert(vocab.words()[t], f, std::move(rec));
    }
  }
  return store;
}

// --- interchange format ----------------------------------------------------

namespace {
constexpr std::string_view kMagic = "#driftscope-embeddings";
}

std::string format_embeddings(const EmbeddingStore& store) {
  std::string out;
  out += kMagic;
  out += "\tv1\tdim=" + std::to_string(store.dim()) + "\tframes=";
  for (std::size_t i = 0; i < store.frame_labels().size(); ++i) {
    if (i) out += ',';
    out += store.frame_labels()[i];
  }
  out += '\n';
  for (const auto& [key, rec] : store.records()) {
    out += key.first;
    out += '\t';
    out += std::to_string(key.second);
    out += '\t';
    out += std::to_string(rec.occurrence_count);
    out += '\t';
    for (std::size_t i = 0; i < rec.vector.size(); ++i) {
      if (i) out += ' ';
      out += detail::format_g9(rec.vector[i]);
    }
    out += '\n';
  }
  return out;
}

void export_embeddings(const EmbeddingStore& store, const fs::path& path) {
  for (const auto& label : store.frame_labels()) {
    if (label.find_first_of(",\t\n") != std::string::npos) {
      throw InvalidArgument("frame label '" + label + "' cannot be written to the interchange header");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << format_embeddings(store);
  if (!out) throw Error("failed while writing " + path.string());
}

EmbeddingStore parse_embeddings(std::string_view text, const std::string& source_name) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    return true;
  };
  auto where = [&] { return source_name + ":" + std::to_string(line_no) + ": "; };

  std::string_view line;
  if (!next_line(line)) throw FormatError(source_name + ": empty embedding file");
  auto header = detail::split(line, '\t');
  if (header.size() != 4 || header[0] != kMagic || header[1] != "v1" ||
      header[2].substr(0, 4) != "dim=" || header[3].substr(0, 7) != "frames=") {
    throw FormatError(where() + "expected header '#driftscope-embeddings\\tv1\\tdim=<D>\\tframes=<labels>'");
  }
  std::size_t dim = 0;
  if (!detail::parse_number(header[2].substr(4), dim) || dim == 0) {
    throw FormatError(where() + "invalid dimension '" + std::string(header[2].substr(4)) + "'");
  }
  std::vector<std::string> labels;
  for (auto l : detail::split(header[3].substr(7), ',')) labels.emplace_back(l);
  if (header[3].size() == 7) labels.clear();

  EmbeddingStore store(dim, std::move(labels), Provenance::kImported, source_name);
  while (next_line(line)) {
    if (line.empty()) continue;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 4) {
      throw FormatError(where() + "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
    }
    std::size_t frame = 0;
    EmbeddingRecord rec;
    if (!detail::parse_number(fields[1], frame)) {
      throw FormatError(where() + "invalid frame index '" + std::string(fields[1]) + "'");
    }
    if (!detail::parse_number(fields[2], rec.occurrence_count)) {
      throw FormatError(where() + "invalid occurrence count '" + std::string(fields[2]) + "'");
    }
    rec.vector.reserve(dim);
    for (auto tok : detail::split(fields[3], ' ')) {
      if (tok.empty()) continue;
      double v = 0.0;
      if (!detail::parse_number(tok, v)) {
        throw FormatError(where() + "invalid number '" + std::string(tok) + "'");
      }
      rec.vector.push_back(v);
    }
    if (rec.vector.size() != dim) {
      throw FormatError(where() + "dimension mismatch: " + std::to_string(rec.vector.size()) +
                        " values, header declares dim=" + std::to_string(dim));
    }
    try {
      store.insert(std::string(fields[0]), frame, std::move(rec));
    } catch (const InvalidArgument& e) {
      throw FormatError(where() + e.what());
    }
  }
  return store;
}

EmbeddingStore import_embeddings(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_embeddings(buffer.str(), path.string());
}

}  // namespace driftscope
