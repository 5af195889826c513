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

#include "driftscope/lda.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "driftscope/error.hpp"

namespace driftscope {

std::vector<std::string> LdaConfig::violations() const {
  std::vector<std::string> out;
  if (topics == 0) out.push_back("lda topics must be positive");
  if (passes == 0) out.push_back("lda passes must be positive");
  if (!(max_doc_fraction > 0.0 && max_doc_fraction <= 1.0)) {
    out.push_back("lda max_doc_fraction must be in (0, 1]");
  }
  if (alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) out.push_back("lda alpha must be positive");
  if (!(beta > 0.0 && std::isfinite(beta))) out.push_back("lda beta must be positive");
  return out;
}

std::vector<std::string> LdaModel::top_words(std::size_t topic, std::size_t n) const {
  const auto& row = topic_word.at(topic);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  order.resize(std::min(n, order.size()));
  std::vector<std::string> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(vocabulary[i]);
  return out;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits. std::mt19937_64 is fully
// specified, unlike the standard distributions, so draws match everywhere.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

LdaModel lda_fit(const std::vector<std::vector<std::string>>& docs, const LdaConfig& cfg) {
  if (auto problems = cfg.violations(); !problems.empty()) {
    throw InvalidArgument("invalid LDA configuration: " + problems.front());
  }
  if (docs.empty()) throw InvalidArgument("LDA needs at least one document");

  std::map<std::string, std::size_t> doc_freq;
  for (const auto& doc : docs) {
    std::vector<std::string> uniq(doc.begin(), doc.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto& w : uniq) ++doc_freq[w];
  }
  const double max_docs = cfg.max_doc_fraction * static_cast<double>(docs.size());

  LdaModel model;
  model.topics = cfg.topics;
  model.alpha = cfg.resolved_alpha();
  model.beta = cfg.beta;
  model.few_documents = docs.size() < cfg.topics;
  std::unordered_map<std::string_view, std::uint32_t> word_id;
  for (const auto& [word, df] : doc_freq) {
    if (df < cfg.min_doc_freq || static_cast<double>(df) > max_docs) continue;
    model.vocabulary.push_back(word);
  }
  if (model.vocabulary.empty()) {
    throw InvalidArgument(
        "LDA vocabulary is empty after document-frequency filtering; lower min_doc_freq or raise "
        "max_doc_fraction");
  }
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i) {
    word_id.emplace(model.vocabulary[i], static_cast<std::uint32_t>(i));
  }

  const std::size_t K = cfg.topics;
  const std::size_t V = model.vocabulary.size();
  const std::size_t D = docs.size();
  std::vector<std::vector<std::uint32_t>> words(D);
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& w : docs[d]) {
      if (auto it = word_id.find(w); it != word_id.end()) words[d].push_back(it->second);
    }
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<std::uint32_t>> z(D);
  std::vector<std::uint64_t> doc_topic(D * K, 0);
  std::vector<std::uint64_t> topic_word(K * V, 0);
  std::vector<std::uint64_t> topic_total(K, 0);
  for (std::size_t d = 0; d < D; ++d) {
    z[d].resize(words[d].size());
    for (std::size_t i = 0; i < words[d].size(); ++i) {
      const auto k = static_cast<std::uint32_t>(rng() % K);
      z[d][i] = k;
      ++doc_topic[d * K + k];
      ++topic_word[k * V + words[d][i]];
      ++topic_total[k];
    }
  }

  const double alpha = model.alpha;
  const double beta = model.beta;
  const double v_beta = static_cast<double>(V) * beta;
  std::vector<double> cumulative(K);
  for (std::size_t pass = 0; pass < cfg.passes; ++pass) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::uint32_t k = z[d][i];
        --doc_topic[d * K + k];
        --topic_word[k * V + w];
        --topic_total[k];

        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (static_cast<double>(doc_topic[d * K + t]) + alpha) *
                   (static_cast<double>(topic_word[t * V + w]) + beta) /
                   (static_cast<double>(topic_total[t]) + v_beta);
          cumulative[t] = total;
        }
        const double u = uniform01(rng) * total;
        k = static_cast<std::uint32_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (k >= K) k = static_cast<std::uint32_t>(K - 1);

        z[d][i] = k;
        ++doc_topic[d * K + k];
        ++topic_word[k * V + w];
        ++topic_total[k];
      }
    }
  }

  model.doc_topic.assign(D, std::vector<double>(K, 0.0));
  for (std::size_t d = 0; d < D; ++d) {
    const double denom = static_cast<double>(words[d].size()) + static_cast<double>(K) * alpha;
    for (std::size_t t = 0; t < K; ++t) {
      model.doc_topic[d][t] = (static_cast<double>(doc_topic[d * K + t]) + alpha) / denom;
    }
  }
  model.topic_word.assign(K, std::vector<double>(V, 0.0));
  for (std::size_t t = 0; t < K; ++t) {
    const double denom = static_cast<double>(topic_total[t]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      model.topic_word[t][w] = (static_cast<double>(topic_word[t * V + w]) + beta) / denom;
    }
  }
  return model;
}

std::vector<TopicShift> topic_shift_ranking(const LdaModel& model,
                                            const std::vector<std::size_t>& frame_of,
                                            std::size_t first, std::size_t last,
                                            std::size_t top_n) {
  if (frame_of.size() != model.doc_topic.size()) {
    throw InvalidArgument("frame assignment covers " + std::to_string(frame_of.size()) +
                          " documents but the model has " + std::to_string(model.doc_topic.size()));
  }
  std::vector<double> sum_first(model.topics, 0.0);
  std::vector<double> sum_last(model.topics, 0.0);
  std::size_t n_first = 0, n_last = 0;
  for (std::size_t d = 0; d < frame_of.size(); ++d) {
    if (frame_of[d] == first) {
      ++n_first;
      for (std::size_t t = 0; t < model.topics; ++t) sum_first[t] += model.doc_topic[d][t];
    } else if (frame_of[d] == last) {
      ++n_last;
      for (std::size_t t = 0; t < model.topics; ++t) sum_last[t] += model.doc_topic[d][t];
    }
  }
  if (n_first == 0 || n_last == 0) {
    throw InvalidArgument("frame " + std::to_string(n_first == 0 ? first : last) +
                          " has no documents in the topic model");
  }
  std::vector<TopicShift> shifts(model.topics);
  for (std::size_t t = 0; t < model.topics; ++t) {
    shifts[t].topic = t;
    shifts[t].importance_first = sum_first[t] / static_cast<double>(n_first);
    shifts[t].importance_last = sum_last[t] / static_cast<double>(n_last);
    shifts[t].gain = shifts[t].importance_last - shifts[t].importance_first;
  }
  std::stable_sort(shifts.begin(), shifts.end(),
                   [](const auto& a, const auto& b) { return a.gain > b.gain; });
  shifts.resize(std::min(top_n, shifts.size()));
  return shifts;
}

LdaInput lda_input(const SlicedCorpus& corpus, std::size_t first, std::size_t last) {
  LdaInput in;
  for (const auto& doc : corpus.documents()) {
    if (doc.frame_index != first && doc.frame_index != last) continue;
    std::vector<std::string> tokens;
    for (const auto& s : doc.sentences) tokens.insert(tokens.end(), s.begin(), s.end());
    in.docs.push_back(std::move(tokens));
    in.frame_of.push_back(doc.frame_index);
  }
  return in;
}

}  // namespace driftscope
