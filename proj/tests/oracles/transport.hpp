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

#ifndef DRIFTSCOPE_TESTS_ORACLES_TRANSPORT_HPP_
#define DRIFTSCOPE_TESTS_ORACLES_TRANSPORT_HPP_

// Minimum-cost transport between two discrete distributions by successive
// shortest augmenting paths on the bipartite flow network. Independent of the
// cumulative-sum formula used by driftscope::emd.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace driftscope::oracle {

// supply[i] at position i, demand[j] at position j, cost |i - j|. Totals must
// match (relative 1e-12).
inline double min_cost_transport(const std::vector<double>& supply, const std::vector<double>& demand) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  double total_s = 0.0, total_d = 0.0;
  for (double v : supply) total_s += v;
  for (double v : demand) total_d += v;
  if (std::abs(total_s - total_d) > 1e-12 * std::max(1.0, total_s)) {
    throw std::invalid_argument("unbalanced transport problem");
  }

  // Nodes: 0 source, 1..m supply, m+1..m+n demand, m+n+1 sink.
  const std::size_t source = 0, sink = m + n + 1, nodes = m + n + 2;
  struct Edge {
    std::size_t to;
    double cap;
    double cost;
    std::size_t rev;
  };
  std::vector<std::vector<Edge>> g(nodes);
  auto add = [&](std::size_t u, std::size_t v, double cap, double cost) {
    g[u].push_back({v, cap, cost, g[v].size()});
    g[v].push_back({u, 0.0, -cost, g[u].size() - 1});
  };
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) add(source, 1 + i, supply[i], 0.0);
  for (std::size_t j = 0; j < n; ++j) add(1 + m + j, sink, demand[j], 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      add(1 + i, 1 + m + j, inf, std::abs(static_cast<double>(i) - static_cast<double>(j)));
    }
  }

  const double eps = 1e-15 * std::max(1.0, total_s);
  double cost = 0.0;
  double remaining = total_s;
  while (remaining > eps) {
    // Bellman-Ford over the residual graph.
    std::vector<double> dist(nodes, inf);
    std::vector<std::size_t> prev_node(nodes, nodes), prev_edge(nodes, 0);
    dist[source] = 0.0;
    for (std::size_t round = 0; round + 1 < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == inf) continue;
        for (std::size_t e = 0; e < g[u].size(); ++e) {
          const Edge& ed = g[u][e];
          if (ed.cap <= eps) continue;
          if (dist[u] + ed.cost < dist[ed.to] - 1e-12) {
            dist[ed.to] = dist[u] + ed.cost;
            prev_node[ed.to] = u;
            prev_edge[ed.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[sink] == inf) break;
    double push = remaining;
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, g[prev_node[v]][prev_edge[v]].cap);
    }
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& ed = g[prev_node[v]][prev_edge[v]];
      ed.cap -= push;
      g[v][ed.rev].cap += push;
    }
    cost += push * dist[sink];
    remaining -= push;
  }
  return cost;
}

// Unequal totals: the lighter histogram receives a virtual bin one step
// past its last bin that absorbs the surplus.
inline double transport_with_sink(std::vector<double> a, std::vector<double> b) {
  double ta = 0.0, tb = 0.0;
  for (double v : a) ta += v;
  for (double v : b) tb += v;
  a.push_back(ta < tb ? tb - ta : 0.0);
  b.push_back(tb < ta ? ta - tb : 0.0);
  return min_cost_transport(a, b);
}

}  // namespace driftscope::oracle

#endif  // DRIFTSCOPE_TESTS_ORACLES_TRANSPORT_HPP_
