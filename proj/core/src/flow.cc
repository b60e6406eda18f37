// Copyright 2026 The edgecache Authors
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

#include "edgecache/flow.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "edgecache/error.h"

namespace edgecache {

FlowNetwork::FlowNetwork(int num_nodes) : num_nodes_(num_nodes) {
  Require(num_nodes >= 1, ErrorCode::kInvalidParameter,
          "flow network needs at least one node");
}

int FlowNetwork::AddArc(int from, int to, std::int64_t capacity,
                        std::int64_t cost) {
  Require(from >= 0 && from < num_nodes_ && to >= 0 && to < num_nodes_,
          ErrorCode::kIndexOutOfRange, "arc endpoint out of range");
  Require(capacity >= 0, ErrorCode::kInvalidParameter,
          "arc capacity must be nonnegative");
  from_.push_back(from);
  to_.push_back(to);
  capacity_.push_back(capacity);
  cost_.push_back(cost);
  return num_arcs() - 1;
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Residual graph: arc 2i is forward arc i, arc 2i+1 its reverse.
struct Residual {
  std::vector<int> head;
  std::vector<std::int64_t> cap;
  std::vector<std::int64_t> cost;
  std::vector<std::vector<int>> out;
};

}  // namespace

FlowSolution MinCostFlow(const FlowNetwork& net, int source, int sink,
                         std::int64_t flow_value) {
  const int n = net.num_nodes();
  Require(source >= 0 && source < n && sink >= 0 && sink < n,
          ErrorCode::kIndexOutOfRange, "source or sink out of range");
  Require(flow_value >= 0, ErrorCode::kInvalidParameter,
          "flow value must be nonnegative");

  Residual g;
  g.out.resize(n);
  for (int a = 0; a < net.num_arcs(); ++a) {
    g.out[net.from(a)].push_back(static_cast<int>(g.head.size()));
    g.head.push_back(net.to(a));
    g.cap.push_back(net.capacity(a));
    g.cost.push_back(net.cost(a));
    g.out[net.to(a)].push_back(static_cast<int>(g.head.size()));
    g.head.push_back(net.from(a));
    g.cap.push_back(0);
    g.cost.push_back(-net.cost(a));
  }

  // Bellman-Ford from the source gives feasible potentials even with
  // negative arc costs.
  std::vector<std::int64_t> potential(n, kInf);
  potential[source] = 0;
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      if (potential[v] == kInf) continue;
      for (int e : g.out[v]) {
        if (g.cap[e] > 0 && potential[v] + g.cost[e] < potential[g.head[e]]) {
          potential[g.head[e]] = potential[v] + g.cost[e];
          changed = true;
        }
      }
    }
    if (!changed) break;
    Require(round + 1 < n, ErrorCode::kInvalidParameter,
            "flow network has a negative-cost cycle");
  }
  for (auto& p : potential) {
    if (p == kInf) p = 0;
  }

  std::int64_t sent = 0;
  std::int64_t total_cost = 0;
  std::vector<std::int64_t> dist(n);
  std::vector<int> parent_arc(n);
  using Item = std::pair<std::int64_t, int>;
  while (sent < flow_value) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0;
    queue.push({0, source});
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (d != dist[v]) continue;
      for (int e : g.out[v]) {
        if (g.cap[e] <= 0) continue;
        const int w = g.head[e];
        const std::int64_t reduced = g.cost[e] + potential[v] - potential[w];
        if (d + reduced < dist[w]) {
          dist[w] = d + reduced;
          parent_arc[w] = e;
          queue.push({dist[w], w});
        }
      }
    }
    Require(dist[sink] < kInf, ErrorCode::kInfeasibleFlow,
            "maximum flow " + std::to_string(sent) +
                " is below the requested " + std::to_string(flow_value));
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }

    std::int64_t push = flow_value - sent;
    for (int v = sink; v != source; v = g.head[parent_arc[v] ^ 1]) {
      push = std::min(push, g.cap[parent_arc[v]]);
    }
    for (int v = sink; v != source; v = g.head[parent_arc[v] ^ 1]) {
      const int e = parent_arc[v];
      g.cap[e] -= push;
      g.cap[e ^ 1] += push;
      total_cost += push * g.cost[e];
    }
    sent += push;
  }

  FlowSolution solution;
  solution.total_cost = total_cost;
  solution.arc_flow.resize(net.num_arcs());
  for (int a = 0; a < net.num_arcs(); ++a) {
    solution.arc_flow[a] = g.cap[2 * a + 1];
  }
  return solution;
}

}  // namespace edgecache
