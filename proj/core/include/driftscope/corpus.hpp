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

#ifndef DRIFTSCOPE_CORPUS_HPP_
#define DRIFTSCOPE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace driftscope {

using Sentence = std::vector<std::string>;
// Sorted, duplicate-free token list for one sentence.
using TokenSet = std::vector<std::string>;

struct TimeFrame {
  std::string label;
  int year_start = 0;
  int year_end = 0;  // inclusive

  bool contains(int year) const {
    return year >= year_start && year <= year_end;
  }
  bool operator==(const TimeFrame&) const = default;
};

// Ordered, non-overlapping year ranges. Both ends of a frame are inclusive.
class TimeFramePlan {
 public:
  TimeFramePlan() = default;
  // Throws InvalidArgument when the frames violate the plan invariants.
  explicit TimeFramePlan(std::vector<TimeFrame> frames);

  // Parses "label:1979-1995,label2:1996-2000,...".
  static TimeFramePlan parse(std::string_view text);
  // Plan with the five frames 1979-1995, 1996-2000, 2001-2005, 2006-2010 and
  // 2011-2015.
  static TimeFramePlan acl_default();

  // Checks sorting, overlap, bounds and the two-frame minimum. Every
  // violation is reported; an empty result means the frames are usable.
  static std::vector<std::string> violations(const std::vector<TimeFrame>& frames);

  std::optional<std::size_t> frame_of(int year) const;
  std::size_t size() const { return frames_.size(); }
  const std::vector<TimeFrame>& frames() const { return frames_; }
  const TimeFrame& operator[](std::size_t i) const { return frames_.at(i); }
  std::vector<std::string> labels() const;
  std::string to_string() const;

  bool operator==(const TimeFramePlan&) const = default;

 private:
  std::vector<TimeFrame> frames_;
};

struct Document {
  std::string id;
  int year = 0;
  std::size_t frame_index = 0;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

// Documents assigned to frames, with a per-frame index of sentences stored
// as token sets.
class SlicedCorpus {
 public:
  SlicedCorpus() = default;
  // Throws InvalidArgument if a document's frame_index does not match its
  // year under `plan`.
  SlicedCorpus(TimeFramePlan plan, std::vector<Document> documents,
               std::size_t excluded_records = 0);

  const TimeFramePlan& plan() const { return plan_; }
  const std::vector<Document>& documents() const { return documents_; }
  // Sentences of every document in `frame`, in document order.
  const std::vector<TokenSet>& frame_sentences(std::size_t frame) const {
    return frame_sentences_.at(frame);
  }
  std::vector<std::size_t> documents_per_frame() const;
  // Records whose year fell outside every frame.
  std::size_t excluded_records() const { return excluded_records_; }
  bool empty() const { return documents_.empty(); }

 private:
  TimeFramePlan plan_;
  std::vector<Document> documents_;
  std::vector<std::vector<TokenSet>> frame_sentences_;
  std::size_t excluded_records_ = 0;
};

enum class IngestFormat { kJsonl, kDirectory };

IngestFormat parse_ingest_format(std::string_view name);
std::string_view to_string(IngestFormat format);

// Reads raw documents and slices them by year.
//
// kJsonl: one {"id", "year", "text"} object per line. Blank lines are
// skipped. A record without an id is named by its line number.
//
// kDirectory: one sub-directory per frame label. Each holds a manifest.tsv
// with "<file name>\t<year>" lines; every listed file is one document whose
// id is "<label>/<file name>". The frame is always derived from the year.
SlicedCorpus ingest(const std::filesystem::path& path, const TimeFramePlan& plan,
                    IngestFormat format);

// Splits raw text into lowercase token lists. See tokenizer.cpp for the
// exact rules.
std::vector<Sentence> tokenize_sentences(std::string_view text);

struct VocabularyEntry {
  std::uint64_t total_frequency = 0;
  std::vector<std::uint64_t> per_frame_frequency;
  std::size_t frame_presence_count = 0;

  bool operator==(const VocabularyEntry&) const = default;
};

struct VocabularyConfig {
  std::uint64_t min_frequency = 100;
  std::size_t min_length = 3;
  std::size_t min_frames = 2;
  std::set<std::string> stopwords;
  std::optional<std::set<std::string>> pos_allowlist;
};

// Filtered word set with per-frame token frequencies. Iteration and index
// order is sorted word order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::size_t frame_count, std::map<std::string, VocabularyEntry> entries);

  std::size_t size() const { return words_.size(); }
  std::size_t frame_count() const { return frame_count_; }
  const std::vector<std::string>& words() const { return words_; }
  bool contains(std::string_view word) const;
  const VocabularyEntry* find(std::string_view word) const;
  const VocabularyEntry& at(std::string_view word) const;
  // Position of `word` in sorted order.
  std::optional<std::size_t> index_of(std::string_view word) const;
  const std::map<std::string, VocabularyEntry, std::less<>>& entries() const {
    return entries_;
  }

  bool operator==(const Vocabulary& other) const {
    return frame_count_ == other.frame_count_ && entries_ == other.entries_;
  }

 private:
  std::size_t frame_count_ = 0;
  std::map<std::string, VocabularyEntry, std::less<>> entries_;
  std::vector<std::string> words_;
};

// Throws InvalidArgument on an empty corpus or an empty result.
Vocabulary build_vocabulary(const SlicedCorpus& corpus, const VocabularyConfig& cfg);

// Plain text, one word per line. Blank lines and surrounding whitespace are
// ignored; words are lowercased.
std::set<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace driftscope

#endif  // DRIFTSCOPE_CORPUS_HPP_
