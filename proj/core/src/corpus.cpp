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

#include "driftscope/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "driftscope/error.hpp"
#include "text_util.hpp"

namespace driftscope {

namespace fs = std::filesystem;

// --- TimeFramePlan ---------------------------------------------------------

TimeFramePlan::TimeFramePlan(std::vector<TimeFrame> frames) : frames_(std::move(frames)) {
  auto problems = violations(frames_);
  if (!problems.empty()) {
    std::string message = "invalid time frame plan: " + problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) message += "; " + problems[i];
    throw InvalidArgument(message);
  }
}

std::vector<std::string> TimeFramePlan::violations(const std::vector<TimeFrame>& frames) {
  std::vector<std::string> out;
  if (frames.size() < 2) {
    out.push_back("a time frame plan needs at least 2 frames, got " +
                  std::to_string(frames.size()));
  }
  for (const auto& f : frames) {
    if (f.label.empty()) out.push_back("time frame with an empty label");
    if (f.year_start > f.year_end) {
      out.push_back("frame '" + f.label + "' has year_start " + std::to_string(f.year_start) +
                    " after year_end " + std::to_string(f.year_end));
    }
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const auto& prev = frames[i - 1];
    const auto& cur = frames[i];
    if (cur.year_start < prev.year_start) {
      out.push_back("frames '" + prev.label + "' and '" + cur.label +
                    "' are not sorted by year_start");
    }
    if (cur.year_start <= prev.year_end && prev.year_start <= cur.year_end) {
      out.push_back("frames '" + prev.label + "' and '" + cur.label + "' overlap");
    }
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (std::size_t j = i + 1; j < frames.size(); ++j) {
      if (frames[i].label == frames[j].label && !frames[i].label.empty()) {
        out.push_back("duplicate frame label '" + frames[i].label + "'");
      }
    }
  }
  return out;
}

TimeFramePlan TimeFramePlan::parse(std::string_view text) {
  std::vector<TimeFrame> frames;
  for (std::string_view item : detail::split(text, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos) {
      throw InvalidArgument("frame '" + std::string(item) + "' must look like label:start-end");
    }
    TimeFrame frame;
    frame.label = std::string(detail::trim(item.substr(0, colon)));
    const std::string_view range = detail::trim(item.substr(colon + 1));
    // Skip a leading sign so negative years parse.
    const auto dash = range.find('-', 1);
    if (dash == std::string_view::npos ||
        !detail::parse_int(detail::trim(range.substr(0, dash)), frame.year_start) ||
        !detail::parse_int(detail::trim(range.substr(dash + 1)), frame.year_end)) {
      throw InvalidArgument("frame '" + std::string(item) + "' has a malformed year range");
    }
    frames.push_back(std::move(frame));
  }
  return TimeFramePlan(std::move(frames));
}

TimeFramePlan TimeFramePlan::acl_default() {
  return TimeFramePlan({{"1979-1995", 1979, 1995},
                        {"1996-2000", 1996, 2000},
                        {"2001-2005", 2001, 2005},
                        {"2006-2010", 2006, 2010},
                        {"2011-2015", 2011, 2015}});
}

std::optional<std::size_t> TimeFramePlan::frame_of(int year) const {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (frames_[i].contains(year)) return i;
  }
  return std::nullopt;
}

std::vector<std::string> TimeFramePlan::labels() const {
  std::vector<std::string> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(f.label);
  return out;
}

std::string TimeFramePlan::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (i) out += ',';
    out += frames_[i].label + ':' + std::to_string(frames_[i].year_start) + '-' +
           std::to_string(frames_[i].year_end);
  }
  return out;
}

// --- SlicedCorpus ----------------------------------------------------------

SlicedCorpus::SlicedCorpus(TimeFramePlan plan, std::vector<Document> documents,
                           std::size_t excluded_records)
    : plan_(std::move(plan)),
      documents_(std::move(documents)),
      frame_sentences_(plan_.size()),
      excluded_records_(excluded_records) {
  for (const auto& doc : documents_) {
    const auto frame = plan_.frame_of(doc.year);
    if (!frame || *frame != doc.frame_index) {
      throw InvalidArgument("document '" + doc.id + "' (year " + std::to_string(doc.year) +
                            ") has frame_index " + std::to_string(doc.frame_index) +
                            " inconsistent with the time frame plan");
    }
    auto& index = frame_sentences_[doc.frame_index];
    for (const auto& sentence : doc.sentences) {
      TokenSet set(sentence.begin(), sentence.end());
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      index.push_back(std::move(set));
    }
  }
}

std::vector<std::size_t> SlicedCorpus::documents_per_frame() const {
  std::vector<std::size_t> counts(plan_.size(), 0);
  for (const auto& doc : documents_) ++counts[doc.frame_index];
  return counts;
}

// --- ingest ----------------------------------------------------------------

IngestFormat parse_ingest_format(std::string_view name) {
  if (name == "jsonl") return IngestFormat::kJsonl;
  if (name == "directory" || name == "dir") return IngestFormat::kDirectory;
  throw InvalidArgument("unknown corpus format '" + std::string(name) +
                        "' (expected jsonl or directory)");
}

std::string_view to_string(IngestFormat format) {
  return format == IngestFormat::kJsonl ? "jsonl" : "directory";
}

namespace {

SlicedCorpus ingest_jsonl(const fs::path& path, const TimeFramePlan& plan) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());

  std::vector<Document> docs;
  std::size_t excluded = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + ": malformed JSON record: " + e.what());
    }
    if (!record.is_object()) throw FormatError(where + ": record is not a JSON object");

    std::string id = "line " + std::to_string(line_no);
    if (auto it = record.find("id"); it != record.end()) {
      if (it->is_string()) id = it->get<std::string>();
      else if (it->is_number_integer()) id = std::to_string(it->get<long long>());
      else throw FormatError(where + ": field 'id' must be text");
    }
    auto year_it = record.find("year");
    if (year_it == record.end() || !year_it->is_number_integer()) {
      throw FormatError(where + " (record '" + id + "'): missing or non-integer 'year'");
    }
    auto text_it = record.find("text");
    if (text_it == record.end() || !text_it->is_string()) {
      throw FormatError(where + " (record '" + id + "'): missing or non-text 'text'");
    }

    const int year = year_it->get<int>();
    const auto frame = plan.frame_of(year);
    if (!frame) {
      ++excluded;
      continue;
    }
    docs.push_back(Document{std::move(id), year, *frame,
                            tokenize_sentences(text_it->get_ref<const std::string&>())});
  }
  if (in.bad()) throw Error("error while reading " + path.string());
  return SlicedCorpus(plan, std::move(docs), excluded);
}

SlicedCorpus ingest_directory(const fs::path& root, const TimeFramePlan& plan) {
  if (!fs::is_directory(root)) throw Error("corpus directory " + root.string() + " not found");

  std::vector<Document> docs;
  std::size_t excluded = 0;
  for (const auto& frame : plan.frames()) {
    const fs::path dir = root / frame.label;
    if (!fs::is_directory(dir)) continue;
    const fs::path manifest = dir / "manifest.tsv";
    std::ifstream in(manifest, std::ios::binary);
    if (!in) throw Error("cannot open manifest " + manifest.string());

    std::vector<std::pair<std::string, int>> listed;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      std::string_view view = detail::trim(line);
      if (view.empty() || view.front() == '#') continue;
      const auto tab = view.find('\t');
      int year = 0;
      if (tab == std::string_view::npos ||
          !detail::parse_int(detail::trim(view.substr(tab + 1)), year)) {
        throw FormatError(manifest.string() + ":" + std::to_string(line_no) +
                          ": expected '<file>\\t<year>'");
      }
      listed.emplace_back(std::string(detail::trim(view.substr(0, tab))), year);
    }
    std::sort(listed.begin(), listed.end());

    for (const auto& [name, year] : listed) {
      const fs::path file = dir / name;
      std::ifstream doc_in(file, std::ios::binary);
      if (!doc_in) throw Error("cannot read document " + file.string());
      std::ostringstream buffer;
      buffer << doc_in.rdbuf();
      const auto frame_index = plan.frame_of(year);
      if (!frame_index) {
        ++excluded;
        continue;
      }
      docs.push_back(
          Document{frame.label + "/" + name, year, *frame_index, tokenize_sentences(buffer.str())});
    }
  }
  return SlicedCorpus(plan, std::move(docs), excluded);
}

}  // namespace

SlicedCorpus ingest(const fs::path& path, const TimeFramePlan& plan, IngestFormat format) {
  if (!fs::exists(path)) throw Error("corpus path " + path.string() + " does not exist");
  return format == IngestFormat::kJsonl ? ingest_jsonl(path, plan) : ingest_directory(path, plan);
}

// --- Vocabulary ------------------------------------------------------------

Vocabulary::Vocabulary(std::size_t frame_count, std::map<std::string, VocabularyEntry> entries)
    : frame_count_(frame_count) {
  words_.reserve(entries.size());
  for (auto& [word, entry] : entries) {
    if (entry.per_frame_frequency.size() != frame_count) {
      throw InvalidArgument("vocabulary entry '" + word + "' has " +
                            std::to_string(entry.per_frame_frequency.size()) +
                            " frame counts, expected " + std::to_string(frame_count));
    }
    words_.push_back(word);
    entries_.emplace(word, std::move(entry));
  }
}

bool Vocabulary::contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }

const VocabularyEntry* Vocabulary::find(std::string_view word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

const VocabularyEntry& Vocabulary::at(std::string_view word) const {
  const auto* entry = find(word);
  if (!entry) throw InvalidArgument("word '" + std::string(word) + "' is not in the vocabulary");
  return *entry;
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

namespace {

bool is_numeric_word(std::string_view word) {
  return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '.' || c == ',' || c == '-';
  }) && std::any_of(word.begin(), word.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Vocabulary build_vocabulary(const SlicedCorpus& corpus, const VocabularyConfig& cfg) {
  if (corpus.empty()) throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  const std::size_t frames = corpus.plan().size();

  std::map<std::string, std::vector<std::uint64_t>> counts;
  for (const auto& doc : corpus.documents()) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence) {
        auto [it, inserted] = counts.try_emplace(token);
        if (inserted) it->second.assign(frames, 0);
        ++it->second[doc.frame_index];
      }
    }
  }

  std::map<std::string, VocabularyEntry> kept;
  for (auto& [word, per_frame] : counts) {
    if (word.size() < cfg.min_length) continue;
    if (cfg.stopwords.contains(word) || is_numeric_word(word)) continue;
    if (cfg.pos_allowlist && !cfg.pos_allowlist->contains(word)) continue;
    VocabularyEntry entry;
    entry.per_frame_frequency = std::move(per_frame);
    for (auto c : entry.per_frame_frequency) {
      entry.total_frequency += c;
      if (c > 0) ++entry.frame_presence_count;
    }
    if (entry.total_frequency < cfg.min_frequency) continue;
    if (entry.frame_presence_count < cfg.min_frames) continue;
    kept.emplace(word, std::move(entry));
  }
  if (kept.empty()) {
    throw InvalidArgument(
        "vocabulary is empty after filtering; lower min_frequency, min_length or min_frames");
  }
  return Vocabulary(frames, std::move(kept));
}

std::set<std::string> load_word_list(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open word list " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string word(detail::trim(line));
    if (word.empty()) continue;
    for (char& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace driftscope
