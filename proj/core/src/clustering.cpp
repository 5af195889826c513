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

#include "driftscope/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "driftscope/error.hpp"
#include "parallel.hpp"

namespace driftscope {

std::vector<std::string> APParams::violations() const {
  std::vector<std::string> out;
  if (!(damping >= 0.5 && damping < 1.0)) out.push_back("damping must be in [0.5, 1)");
  if (max_iterations == 0) out.push_back("max_iterations must be positive");
  if (convergence_window == 0) out.push_back("convergence_window must be positive");
  if (convergence_window > max_iterations) {
    out.push_back("convergence_window must not exceed max_iterations");
  }
  if (preference && !std::isfinite(*preference)) out.push_back("preference must be finite");
  return out;
}

namespace {

// Below this many points the per-iteration thread start-up costs more than
// the row updates.
constexpr std::size_t kParallelThreshold = 256;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

}  // namespace

APResult ap_fit(std::span<const std::vector<double>> points, const APParams& params) {
  if (auto problems = params.violations(); !problems.empty()) {
    throw InvalidArgument("invalid affinity propagation parameters: " + problems.front());
  }
  const std::size_t n = points.size();
  if (n == 0) throw InvalidArgument("affinity propagation needs at least one point");
  const std::size_t dim = points[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].size() != dim) {
      throw InvalidArgument("point " + std::to_string(i) + " has dimension " +
                            std::to_string(points[i].size()) + ", expected " + std::to_string(dim));
    }
    for (double x : points[i]) {
      if (!std::isfinite(x)) {
        throw InvalidArgument("point " + std::to_string(i) + " has a non-finite component");
      }
    }
  }

  APResult result;
  if (n == 1) {
    result.exemplars = {0};
    result.assignment = {0};
    result.converged = true;
    result.preference = params.preference.value_or(0.0);
    return result;
  }

  std::vector<double> s(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dist = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = points[i][c] - points[j][c];
        dist += diff * diff;
      }
      s[i * n + j] = -dist;
      s[j * n + i] = -dist;
    }
  }
  double preference = 0.0;
  if (params.preference) {
    preference = *params.preference;
  } else {
    std::vector<double> off;
    off.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off.push_back(s[i * n + j]);
    }
    preference = median_of(std::move(off));
  }
  for (std::size_t k = 0; k < n; ++k) s[k * n + k] = preference;
  result.preference = preference;

  std::vector<double> r(n * n, 0.0);
  std::vector<double> a(n * n, 0.0);
  const double damping = params.damping;
  const std::size_t workers = n >= kParallelThreshold ? detail::resolve_workers(params.workers) : 1;

  auto update_responsibility = [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      const double* srow = &s[i * n];
      const double* arow = &a[i * n];
      double* rrow = &r[i * n];
      double best = -std::numeric_limits<double>::infinity();
      double second = best;
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = arow[k] + srow[k];
        if (v > best) {
          second = best;
          best = v;
          best_k = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double fresh = srow[k] - (k == best_k ? second : best);
        rrow[k] = damping * rrow[k] + (1.0 - damping) * fresh;
      }
    }
  };

  auto update_availability = [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      double positive_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) positive_sum += std::max(0.0, r[i * n + k]);
      }
      const double rkk = r[k * n + k];
      for (std::size_t i = 0; i < n; ++i) {
        double fresh;
        if (i == k) {
          fresh = positive_sum;
        } else {
          fresh = std::min(0.0, rkk + positive_sum - std::max(0.0, r[i * n + k]));
        }
        a[i * n + k] = damping * a[i * n + k] + (1.0 - damping) * fresh;
      }
    }
  };

  std::vector<std::size_t> exemplars;
  std::vector<std::size_t> previous;
  std::size_t stable = 0;
  std::size_t it = 0;
  while (it < params.max_iterations) {
    detail::parallel_chunks(n, workers, update_responsibility);
    detail::parallel_chunks(n, workers, update_availability);
    ++it;

    exemplars.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (r[k * n + k] + a[k * n + k] > 0.0) exemplars.push_back(k);
    }
    if (it > 1 && exemplars == previous) {
      ++stable;
    } else {
      stable = 1;
    }
    previous = exemplars;
    if (stable >= params.convergence_window) {
      result.converged = true;
      break;
    }
  }
  result.iterations = it;

  if (exemplars.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k) {
      if (r[k * n + k] + a[k * n + k] > r[best * n + best] + a[best * n + best]) best = k;
    }
    exemplars.push_back(best);
  }

  result.assignment.assign(n, 0);
  std::vector<bool> is_exemplar(n, false);
  for (auto e : exemplars) is_exemplar[e] = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_exemplar[i]) {
      result.assignment[i] = i;
      continue;
    }
    std::size_t best = exemplars.front();
    for (auto e : exemplars) {
      if (s[i * n + e] > s[i * n + best]) best = e;
    }
    result.assignment[i] = best;
  }
  result.exemplars = std::move(exemplars);
  return result;
}

std::vector<Cluster> cluster_drift(const std::vector<DifferenceVector>& diffs,
                                   const APParams& params, APResult* fit_out) {
  if (diffs.empty()) throw InvalidArgument("no difference vectors to cluster");
  std::vector<std::vector<double>> points;
  points.reserve(diffs.size());
  for (const auto& dv : diffs) points.push_back(dv.d);

  APResult fit = ap_fit(points, params);
  std::vector<Cluster> clusters;
  std::unordered_map<std::size_t, std::size_t> cluster_of_exemplar;
  for (auto e : fit.exemplars) {
    cluster_of_exemplar.emplace(e, clusters.size());
    clusters.push_back(Cluster{clusters.size(), diffs[e].word, {}});
  }
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    clusters[cluster_of_exemplar.at(fit.assignment[i])].members.push_back(diffs[i].word);
  }
  for (auto& c : clusters) std::sort(c.members.begin(), c.members.end());
  if (fit_out) *fit_out = std::move(fit);
  return clusters;
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<Cluster> filter_clusters(const std::vector<Cluster>& clusters,
                                     const std::vector<DifferenceVector>& diffs,
                                     std::size_t min_size, FilterSummary* summary) {
  std::unordered_map<std::string_view, const DifferenceVector*> by_word;
  for (const auto& dv : diffs) by_word.emplace(dv.word, &dv);
  auto lookup = [&](const std::string& w) {
    auto it = by_word.find(w);
    if (it == by_word.end()) {
      throw InvalidArgument("cluster member '" + w + "' has no difference vector");
    }
    return it->second;
  };

  FilterSummary local;
  local.clusters_before = clusters.size();
  std::vector<double> magnitudes;
  for (const auto& c : clusters) {
    for (const auto& m : c.members) magnitudes.push_back(lookup(m)->magnitude);
  }
  if (magnitudes.empty()) {
    if (summary) *summary = local;
    return {};
  }
  local.q1 = quantile_linear(magnitudes, 0.25);

  std::vector<Cluster> out;
  for (const auto& c : clusters) {
    Cluster kept{c.id, c.exemplar, {}};
    for (const auto& m : c.members) {
      if (lookup(m)->magnitude < local.q1) {
        ++local.words_removed;
      } else {
        kept.members.push_back(m);
      }
    }
    if (kept.members.size() < min_size || kept.members.empty()) continue;
    if (std::find(kept.members.begin(), kept.members.end(), kept.exemplar) == kept.members.end()) {
      const auto& removed = lookup(c.exemplar)->d;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : kept.members) {
        const auto& d = lookup(m)->d;
        double dist = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) dist += (d[i] - removed[i]) * (d[i] - removed[i]);
        if (dist < best) {
          best = dist;
          kept.exemplar = m;
        }
      }
    }
    out.push_back(std::move(kept));
  }
  local.clusters_after = out.size();
  if (summary) *summary = local;
  return out;
}

}  // namespace driftscope
