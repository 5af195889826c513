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

#ifndef DRIFTSCOPE_LDA_HPP_
#define DRIFTSCOPE_LDA_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftscope/corpus.hpp"

namespace driftscope {

struct LdaConfig {
  std::size_t topics = 100;
  std::size_t passes = 20;
  std::size_t min_doc_freq = 30;
  double max_doc_fraction = 0.75;
  std::uint64_t seed = 1;
  // Unset: 50 / topics.
  std::optional<double> alpha;
  double beta = 0.01;

  double resolved_alpha() const { return alpha.value_or(50.0 / static_cast<double>(topics)); }
  std::vector<std::string> violations() const;
};

struct LdaModel {
  std::size_t topics = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::string> vocabulary;             // sorted
  std::vector<std::vector<double>> doc_topic;     // documents x topics
  std::vector<std::vector<double>> topic_word;    // topics x vocabulary
  bool few_documents = false;                     // fewer documents than topics

  // Highest-mass words of `topic`, ties by word order.
  std::vector<std::string> top_words(std::size_t topic, std::size_t n) const;

  bool operator==(const LdaModel&) const = default;
};

// Collapsed Gibbs sampling over bag-of-words documents. Words kept in the
// model occur in at least min_doc_freq documents and in at most
// max_doc_fraction of them. Throws InvalidArgument when that leaves nothing.
LdaModel lda_fit(const std::vector<std::vector<std::string>>& docs, const LdaConfig& cfg);

struct TopicShift {
  std::size_t topic = 0;
  double importance_first = 0.0;
  double importance_last = 0.0;
  double gain = 0.0;  // importance_last - importance_first

  bool operator==(const TopicShift&) const = default;
};

// Importance of a topic in a frame = mean doc_topic over the frame's
// documents. Returns min(top_n, topics) topics by gain, descending (ties by
// topic id). `frame_of[d]` is the frame of model document d.
std::vector<TopicShift> topic_shift_ranking(const LdaModel& model,
                                            const std::vector<std::size_t>& frame_of,
                                            std::size_t first, std::size_t last,
                                            std::size_t top_n = 10);

// Flattened token lists of every document in `first` or `last`, with each
// document's frame.
struct LdaInput {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::size_t> frame_of;
};
LdaInput lda_input(const SlicedCorpus& corpus, std::size_t first, std::size_t last);

}  // namespace driftscope

#endif  // DRIFTSCOPE_LDA_HPP_
