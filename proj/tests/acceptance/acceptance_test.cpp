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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "driftscope/pipeline.hpp"
#include "oracles/ari.hpp"
#include "oracles/transport.hpp"
#include "synthetic.hpp"

namespace {

using namespace driftscope;
namespace dt = driftscope::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Collects failed expectations for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string out;
    const auto& parts = ok() ? notes_ : failures_;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    if (failed_ > failures_.size()) out += "; " + std::to_string(failed_ - failures_.size()) + " more";
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

using Bins = std::array<double, kHistogramBins>;

Bins random_histogram(dt::Rng& rng) {
  Bins b{};
  const bool sparse = rng.below(4) == 0;
  for (auto& x : b) {
    if (sparse && rng.below(2)) continue;
    x = static_cast<double>(rng.below(1000));
  }
  if (std::accumulate(b.begin(), b.end(), 0.0) == 0.0) b[rng.below(kHistogramBins)] = 1.0;
  return b;
}

std::vector<double> normalized(const Bins& b) {
  const double s = std::accumulate(b.begin(), b.end(), 0.0);
  std::vector<double> out;
  for (double x : b) out.push_back(x / s);
  return out;
}

// --- criteria ---------------------------------------------------------------

void emd_oracle(Check& c) {
  const auto start = Clock::now();
  dt::Rng rng(1000);
  double worst_norm = 0.0, worst_counts = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Bins a = random_histogram(rng);
    const Bins b = random_histogram(rng);
    const double dn = std::abs(emd(a, b, EmdMode::kNormalized) - oracle::min_cost_transport(normalized(a), normalized(b)));
    const double dc = std::abs(emd(a, b, EmdMode::kCounts) -
                               oracle::transport_with_sink({a.begin(), a.end()}, {b.begin(), b.end()}));
    worst_norm = std::max(worst_norm, dn);
    worst_counts = std::max(worst_counts, dc);
    c.expect(dn <= 1e-9, "normalized pair " + std::to_string(i) + " off by " + num(dn));
    c.expect(dc <= 1e-9, "counts pair " + std::to_string(i) + " off by " + num(dc));
  }
  const double t = seconds_since(start);
  c.expect(t < 10.0, "took " + num(t) + " s");
  c.note("max diff normalized " + num(worst_norm) + ", counts " + num(worst_counts) + ", " + num(t) + " s");
}

void emd_axioms(Check& c) {
  dt::Rng rng(2000);
  double worst_slack = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const Bins a = random_histogram(rng);
    const Bins b = random_histogram(rng);
    const Bins x = random_histogram(rng);
    const auto id = std::to_string(i);
    for (auto mode : {EmdMode::kNormalized, EmdMode::kCounts}) {
      c.expect(emd(a, b, mode) == emd(b, a, mode), "symmetry, triple " + id);
      c.expect(emd(a, a, mode) == 0.0, "identity, triple " + id);
    }
    const double lhs = emd(a, x, EmdMode::kNormalized);
    const double rhs = emd(a, b, EmdMode::kNormalized) + emd(b, x, EmdMode::kNormalized);
    worst_slack = std::max(worst_slack, lhs - rhs);
    c.expect(lhs <= rhs + 1e-9, "triangle, triple " + id);
  }
  c.note("1000 triples, largest d(a,c) - d(a,b) - d(b,c) = " + num(worst_slack));
}

std::vector<std::size_t> labels_of(const APResult& r) {
  std::vector<std::size_t> out;
  for (auto a : r.assignment) out.push_back(a);
  return out;
}

void ap_recovery(Check& c) {
  const auto blobs = dt::make_blobs(3, 20, 8, 10.0, 0.1, 11);
  c.expect(blobs.min_centroid_distance >= 10.0 * blobs.max_radius, "blobs not separated 10x");
  const auto r = ap_fit(blobs.points, APParams{});
  const double ari = oracle::adjusted_rand_index(labels_of(r), blobs.labels);
  c.expect(ari >= 0.95, "ARI " + num(ari));
  c.expect(r.converged && r.iterations <= 1000, "not converged after " + std::to_string(r.iterations));
  for (int rerun = 0; rerun < 3; ++rerun) {
    const auto again = ap_fit(blobs.points, APParams{});
    c.expect(again.assignment == r.assignment && again.exemplars == r.exemplars,
             "rerun " + std::to_string(rerun) + " differs");
  }
  c.note("ARI " + num(ari) + ", " + std::to_string(r.exemplars.size()) + " clusters, " +
         std::to_string(r.iterations) + " iterations, separation " +
         num(blobs.min_centroid_distance / blobs.max_radius) + "x");
}

std::string repeated(const std::string& word, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += word + ". ";
  return out;
}

void vocabulary_rules(Check& c) {
  const auto plan = TimeFramePlan::parse("one:2000-2004,two:2010-2014");
  const auto corpus = dt::make_corpus(
      plan, {{2001, repeated("border", 50) + repeated("bordex", 50) + repeated("ox", 100) +
                        repeated("oxe", 100) + repeated("single", 300)},
             {2012, repeated("border", 50) + repeated("bordex", 49) + repeated("ox", 100) +
                        repeated("oxe", 100)}});
  const auto vocab = build_vocabulary(corpus, VocabularyConfig{});
  // border: 100; bordex: 99; ox: length 2; oxe: length 3; single: one frame.
  const std::vector<std::string> expected{"border", "oxe"};
  std::string got;
  for (const auto& w : vocab.words()) got += (got.empty() ? "" : ",") + w;
  c.expect(vocab.words() == expected, "got {" + got + "}");
  c.note("{" + got + "}");
}

RunConfig planted_run_config(const fs::path& dir, const dt::PlantedDriftCorpus& planted) {
  dt::write_file(dir / "corpus.jsonl", planted.jsonl());
  RunConfig cfg;
  apply_setting(cfg, "corpus.path", (dir / "corpus.jsonl").string());
  apply_setting(cfg, "frames", planted.plan);
  apply_setting(cfg, "seed", "7");
  cfg.out_dir = dir / "out";
  return cfg;
}

void end_to_end(Check& c) {
  const auto dir = dt::scratch_dir("acceptance-e2e");
  const auto planted = dt::make_planted_drift(dt::PlantedDriftSpec{});
  const auto cfg = planted_run_config(dir, planted);
  const auto start = Clock::now();
  const auto report = run(cfg);
  const double t = seconds_since(start);
  c.expect(t < 60.0, "took " + num(t) + " s");

  std::size_t docs = 0;
  for (auto n : report.documents_per_frame) docs += n;
  c.expect(!report.top_clusters.empty(), "no ranked clusters");
  if (report.top_clusters.empty()) return;
  const auto& top = report.top_clusters.front();
  const auto& group = planted.groups.front();
  for (const auto& w : group) {
    c.expect(std::binary_search(top.cluster.members.begin(), top.cluster.members.end(), w),
             "planted word '" + w + "' missing from the top cluster");
  }

  // Every cluster holding a static control word, whether or not it survived
  // filtering, scored the same way as the ranked ones.
  const auto corpus = read_corpus(cfg.out_dir / artifact::kCorpus);
  std::vector<Cluster> static_clusters;
  for (const auto& cl : read_clusters(cfg.out_dir / artifact::kClustersAll)) {
    const bool has_static = std::any_of(planted.static_group.begin(), planted.static_group.end(), [&](const auto& w) {
      return std::binary_search(cl.members.begin(), cl.members.end(), w);
    });
    if (has_static) static_clusters.push_back(cl);
  }
  c.expect(!static_clusters.empty(), "static control words were not clustered");
  double static_max = 0.0;
  for (const auto& s : rank_clusters(static_clusters, corpus, cfg.first(), cfg.last(), cfg.emd_mode)) {
    static_max = std::max(static_max, s.emd);
    c.expect(top.emd > s.emd, "static cluster '" + s.cluster.exemplar + "' EMD " + num(s.emd) +
                                  " not below planted " + num(top.emd));
  }
  c.note(std::to_string(docs) + " docs, planted EMD " + num(top.emd) + ", max static EMD " + num(static_max) +
         ", " + num(t) + " s");
}

EmbeddingStore scaled(const EmbeddingStore& store, double factor) {
  EmbeddingStore out(store.dim(), store.frame_labels(), store.provenance(), store.source());
  for (const auto& [key, rec] : store.records()) {
    EmbeddingRecord r = rec;
    for (auto& x : r.vector) x *= factor;
    out.insert(key.first, key.second, r);
  }
  return out;
}

void drift_math(Check& c) {
  const auto planted = dt::make_planted_drift(dt::PlantedDriftSpec{});
  const auto corpus = planted.sliced();
  const auto vocab = build_vocabulary(corpus, VocabularyConfig{});
  const auto store = compute_native_embeddings(corpus, vocab, NativeEmbeddingConfig{});

  const auto forward = difference_vectors(store, vocab, 0, 1);
  const auto backward = difference_vectors(store, vocab, 1, 0);
  c.expect(forward.size() == backward.size(), "difference vector counts differ");
  for (std::size_t i = 0; i < std::min(forward.size(), backward.size()); ++i) {
    bool neg = forward[i].word == backward[i].word && forward[i].d.size() == backward[i].d.size() &&
               forward[i].magnitude == backward[i].magnitude;
    for (std::size_t k = 0; neg && k < forward[i].d.size(); ++k) neg = backward[i].d[k] == -forward[i].d[k];
    c.expect(neg, "antisymmetry fails for '" + forward[i].word + "'");
  }

  const auto base = semantic_change_scores(store, vocab, 0, 1);
  std::size_t compared = 0;
  for (double factor : {0.001, 3.7, 250.0}) {
    const auto s = semantic_change_scores(scaled(store, factor), vocab, 0, 1);
    c.expect(s.reports.size() == base.reports.size(), "scaled score count differs");
    for (std::size_t i = 0; i < std::min(s.reports.size(), base.reports.size()); ++i) {
      c.expect(s.reports[i].word == base.reports[i].word && s.reports[i].rank == base.reports[i].rank,
               "rank " + std::to_string(i + 1) + " changes under scale " + num(factor));
      ++compared;
    }
  }

  auto flipped = forward;
  for (auto& dv : flipped) {
    for (auto& x : dv.d) x = -x;
  }
  const auto a = cluster_drift(forward, APParams{});
  const auto b = cluster_drift(flipped, APParams{});
  c.expect(a == b, "AP partition changes under a global sign flip");

  const auto blobs = dt::make_blobs(4, 15, 6, 4.0, 1.0, 5);
  auto neg = blobs.points;
  for (auto& p : neg) {
    for (auto& x : p) x = -x;
  }
  const auto ra = ap_fit(blobs.points, APParams{});
  const auto rb = ap_fit(neg, APParams{});
  c.expect(ra.assignment == rb.assignment, "blob partition changes under a global sign flip");

  c.note(std::to_string(forward.size()) + " words antisymmetric, " + std::to_string(compared) +
         " scaled ranks equal, " + std::to_string(a.size()) + " clusters unchanged by sign flip");
}

void histogram(Check& c) {
  const Cluster cl{0, "data", {"data", "label", "set"}};
  const std::vector<TokenSet> sentences{{"data", "label", "model"}, {"data", "train"}, {"data", "label", "set"}};
  const auto h = cooccurrence_histogram(cl, sentences);
  const std::array<std::uint64_t, kHistogramBins> expected{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  c.expect(h.bins == expected, "three-sentence histogram differs");
  c.expect(h.total_sentences == 3, "sentence total " + std::to_string(h.total_sentences));

  Cluster wide{0, "wa", {}};
  TokenSet sentence;
  for (char ch = 'a'; ch < 'a' + 12; ++ch) {
    wide.members.push_back(std::string("w") + ch);
    sentence.push_back(std::string("w") + ch);
  }
  wide.exemplar = wide.members.front();
  const auto clipped = cooccurrence_histogram(wide, std::vector<TokenSet>{sentence});
  std::array<std::uint64_t, kHistogramBins> ten{};
  ten[9] = 1;
  c.expect(clipped.bins == ten, "12-word sentence not clipped into bin 10");
  c.note("bins {1,1,1,0,...}, 12 words land in bin 10");
}

double topic_mass(const LdaModel& m, std::size_t t, const std::vector<std::string>& words) {
  double mass = 0.0;
  for (std::size_t w = 0; w < m.vocabulary.size(); ++w) {
    if (std::find(words.begin(), words.end(), m.vocabulary[w]) != words.end()) mass += m.topic_word[t][w];
  }
  return mass;
}

void lda(Check& c) {
  const auto planted = dt::make_planted_topics(60, 50, 7);
  LdaConfig cfg;
  cfg.topics = 3;
  cfg.passes = 50;
  cfg.min_doc_freq = 5;
  cfg.seed = 3;
  const auto model = lda_fit(planted.docs, cfg);

  std::vector<std::size_t> perm{0, 1, 2}, best = perm;
  double best_total = -1.0;
  do {
    double total = 0.0;
    for (std::size_t p = 0; p < 3; ++p) total += topic_mass(model, perm[p], planted.topic_words[p]);
    if (total > best_total) {
      best_total = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::string masses;
  for (std::size_t p = 0; p < 3; ++p) {
    const double m = topic_mass(model, best[p], planted.topic_words[p]);
    c.expect(m >= 0.9, "planted topic " + std::to_string(p) + " mass " + num(m));
    masses += (p ? "," : "") + num(m);
  }

  const auto shifts = topic_shift_ranking(model, planted.frame_of, 0, 1);
  c.expect(!shifts.empty() && shifts.front().topic == best[planted.last_only_topic],
           "last-frame-only topic not ranked first");
  c.expect(lda_fit(planted.docs, cfg) == model, "refit with the same seed differs");
  c.note("masses " + masses + ", top gain " + (shifts.empty() ? "-" : num(shifts.front().gain)));
}

void reproducibility(Check& c) {
  const auto dir = dt::scratch_dir("acceptance-repro");
  const auto planted = dt::make_planted_drift(dt::PlantedDriftSpec{});
  auto cfg = planted_run_config(dir, planted);
  apply_setting(cfg, "lda.enabled", "true");
  apply_setting(cfg, "lda.passes", "20");
  cfg.out_dir = dir / "first";
  run(cfg);
  cfg.out_dir = dir / "second";
  run(cfg);
  for (auto name : {artifact::kReport, artifact::kReportMarkdown}) {
    const auto a = read_text_file(dir / "first" / name);
    const auto b = read_text_file(dir / "second" / name);
    c.expect(a == b, std::string(name) + " differs between runs");
  }
  c.note("report.json " + std::to_string(read_text_file(dir / "first" / artifact::kReport).size()) +
         " bytes identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"emd-oracle-equivalence", emd_oracle},
      {"emd-axioms", emd_axioms},
      {"ap-planted-recovery", ap_recovery},
      {"vocabulary-filters", vocabulary_rules},
      {"end-to-end-planted-drift", end_to_end},
      {"drift-math-invariances", drift_math},
      {"cooccurrence-histogram", histogram},
      {"lda-baseline", lda},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", c.ok() ? "PASS" : "FAIL", name.c_str(), c.summary().c_str());
    std::fflush(stdout);
    if (!c.ok()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
