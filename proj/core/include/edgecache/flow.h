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

#ifndef EDGECACHE_FLOW_H_
#define EDGECACHE_FLOW_H_

#include <cstdint>
#include <vector>

namespace edgecache {

// Directed network with integral capacities and integral (possibly negative)
// arc costs. The network must not contain a negative-cost cycle.
class FlowNetwork {
 public:
  explicit FlowNetwork(int num_nodes);

  // Returns the arc index.
  int AddArc(int from, int to, std::int64_t capacity, std::int64_t cost);

  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return static_cast<int>(from_.size()); }
  int from(int arc) const { return from_[arc]; }
  int to(int arc) const { return to_[arc]; }
  std::int64_t capacity(int arc) const { return capacity_[arc]; }
  std::int64_t cost(int arc) const { return cost_[arc]; }

 private:
  int num_nodes_;
  std::vector<int> from_;
  std::vector<int> to_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> cost_;
};

struct FlowSolution {
  std::vector<std::int64_t> arc_flow;
  std::int64_t total_cost = 0;
};

// Exact minimum-cost integral flow of `flow_value` units from source to sink
// by successive shortest augmenting paths with node potentials (Bellman-Ford
// initialisation, Dijkstra afterwards). Throws kInfeasibleFlow when the
// maximum flow is smaller than `flow_value`.
FlowSolution MinCostFlow(const FlowNetwork& net, int source, int sink,
                         std::int64_t flow_value);

}  // namespace edgecache

#endif  // EDGECACHE_FLOW_H_
