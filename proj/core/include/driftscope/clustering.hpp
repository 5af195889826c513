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

#ifndef DRIFTSCOPE_CLUSTERING_HPP_
#define DRIFTSCOPE_CLUSTERING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftscope/drift.hpp"

namespace driftscope {

struct APParams {
  double damping = 0.9;
  std::size_t max_iterations = 1000;
  std::size_t convergence_window = 50;
  // Self-similarity. Unset means the median of the off-diagonal similarities.
  std::optional<double> preference;
  // 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;

  std::vector<std::string> violations() const;
};

struct APResult {
  std::vector<std::size_t> exemplars;   // ascending point indices
  std::vector<std::size_t> assignment;  // point -> exemplar point index
  std::size_t iterations = 0;
  bool converged = false;
  double preference = 0.0;  // value actually used
};

// Affinity propagation on s(i, j) = -||x_i - x_j||^2 with damped
// responsibility/availability updates. Stops after max_iterations or once the
// exemplar set has been unchanged for convergence_window iterations. Each
// non-exemplar joins its most similar exemplar (lowest index on ties).
//
// If no point ever satisfies r(k,k) + a(k,k) > 0, the point with the largest
// r(k,k) + a(k,k) becomes the only exemplar.
APResult ap_fit(std::span<const std::vector<double>> points, const APParams& params);

struct Cluster {
  std::size_t id = 0;
  std::string exemplar;
  std::vector<std::string> members;  // sorted; includes the exemplar

  bool operator==(const Cluster&) const = default;
};

// Runs ap_fit on the difference vectors. Cluster ids follow exemplar order.
std::vector<Cluster> cluster_drift(const std::vector<DifferenceVector>& diffs,
                                   const APParams& params, APResult* fit_out = nullptr);

// Quantile with linear interpolation between order statistics (position
// q * (n - 1) in the sorted sample).
double quantile_linear(std::vector<double> values, double q);

struct FilterSummary {
  double q1 = 0.0;
  std::size_t clusters_before = 0;
  std::size_t clusters_after = 0;
  std::size_t words_removed = 0;
};

// Drops members whose magnitude is strictly below the first quartile of all
// clustered magnitudes, then drops clusters with fewer than min_size members.
// A removed exemplar is replaced by the surviving member closest to it.
std::vector<Cluster> filter_clusters(const std::vector<Cluster>& clusters,
                                     const std::vector<DifferenceVector>& diffs,
                                     std::size_t min_size = 5, FilterSummary* summary = nullptr);

}  // namespace driftscope

#endif  // DRIFTSCOPE_CLUSTERING_HPP_
