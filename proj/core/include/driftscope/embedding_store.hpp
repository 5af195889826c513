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

#ifndef DRIFTSCOPE_EMBEDDING_STORE_HPP_
#define DRIFTSCOPE_EMBEDDING_STORE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftscope/corpus.hpp"

namespace driftscope {

struct EmbeddingRecord {
  std::vector<double> vector;
  std::uint64_t occurrence_count = 0;

  bool operator==(const EmbeddingRecord&) const = default;
};

enum class Provenance { kNative, kImported };

// Average vectors per (word, frame). Vectors taken from different frames of
// one store live in the same coordinate system.
class EmbeddingStore {
 public:
  using Key = std::pair<std::string, std::size_t>;

  struct KeyLess {
    using is_transparent = void;
    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      const int c = std::string_view(a.first).compare(std::string_view(b.first));
      return c < 0 || (c == 0 && a.second < b.second);
    }
  };
  using RecordMap = std::map<Key, EmbeddingRecord, KeyLess>;

  EmbeddingStore() = default;
  EmbeddingStore(std::size_t dim, std::vector<std::string> frame_labels, Provenance provenance,
                 std::string source);

  // Throws InvalidArgument on a wrong dimension, a non-finite component, a
  // zero occurrence count, an out-of-range frame or a duplicate key.
  void insert(std::string word, std::size_t frame, EmbeddingRecord record);

  std::optional<std::span<const double>> get(std::string_view word, std::size_t frame) const;
  const EmbeddingRecord* find(std::string_view word, std::size_t frame) const;
  // True when the stored vector has no non-zero component. Such rows are kept;
  // cosine against them is 0.
  bool is_zero(std::string_view word, std::size_t frame) const;
  std::size_t zero_row_count() const;

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& frame_labels() const { return frame_labels_; }
  std::size_t frame_count() const { return frame_labels_.size(); }
  Provenance provenance() const { return provenance_; }
  const std::string& source() const { return source_; }
  // Names of the vector axes when they have meaning (native store: the
  // context words). Empty for imported stores.
  const std::vector<std::string>& axis_labels() const { return axis_labels_; }
  void set_axis_labels(std::vector<std::string> labels);

  std::size_t size() const { return records_.size(); }
  const RecordMap& records() const { return records_; }

  // Keeps only words accepted by `vocab`; returns how many rows were dropped.
  std::size_t retain_vocabulary(const Vocabulary& vocab);

  // Rows and dim equal; provenance and source are not compared.
  bool same_content(const EmbeddingStore& other) const {
    return dim_ == other.dim_ && frame_labels_ == other.frame_labels_ &&
           records_ == other.records_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> frame_labels_;
  Provenance provenance_ = Provenance::kNative;
  std::string source_;
  std::vector<std::string> axis_labels_;
  RecordMap records_;
};

struct NativeEmbeddingConfig {
  std::size_t context_vocab_size = 2000;
  std::size_t window = 5;
  // Subtracted from every PMI value before clipping at zero (natural log).
  double ppmi_shift = 0.0;
  // 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

// Count-based vectors: the PPMI row of each vocabulary word against a
// context vocabulary shared by all frames. The context vocabulary is the
// `context_vocab_size` most frequent vocabulary words over the whole corpus
// (ties by word order). Co-occurrence is counted inside sentences within
// `window` tokens on either side.
EmbeddingStore compute_native_embeddings(const SlicedCorpus& corpus, const Vocabulary& vocab,
                                         const NativeEmbeddingConfig& cfg);

// Interchange format (UTF-8 TSV):
//   #driftscope-embeddings\tv1\tdim=<D>\tframes=<label,label,...>
//   <word>\t<frame_index>\t<occurrence_count>\t<f1> <f2> ... <fD>
// Floats are written with 9 significant digits; rows in (word, frame) order.
EmbeddingStore import_embeddings(const std::filesystem::path& path);
void export_embeddings(const EmbeddingStore& store, const std::filesystem::path& path);
std::string format_embeddings(const EmbeddingStore& store);
EmbeddingStore parse_embeddings(std::string_view text, const std::string& source_name);

}  // namespace driftscope

#endif  // DRIFTSCOPE_EMBEDDING_STORE_HPP_
