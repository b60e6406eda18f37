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

#include "oracles.h"

#include <algorithm>
#include <functional>
#include <limits>

namespace edgecache::testing {

Cost OracleServingCost(const CacheState& state,
                       std::span<const std::int64_t> weights,
                       const CostMatrix& costs) {
  Cost total = 0;
  for (int n = 0; n < state.num_contents(); ++n) {
    for (int u = 0; u < costs.num_users(); ++u) {
      // source 0 is the macro cell, 1..M the small cells
      Cost best = std::numeric_limits<Cost>::max();
      for (int source = 0; source <= state.num_scbs(); ++source) {
        if (source > 0 && !state.cached(n, source - 1)) continue;
        const Cost c = source == 0 ? costs.mcbs(u) : costs.scbs(source - 1, u);
        best = std::min(best, c);
      }
      total += weights[n] * best;
    }
  }
  return total;
}

bool OracleMinCostFlow(const FlowNetwork& net, int source, int sink,
                       std::int64_t flow_value, std::int64_t* best) {
  const int arcs = net.num_arcs();
  std::vector<std::int64_t> flow(arcs, 0);
  bool found = false;
  std::function<void(int)> visit = [&](int a) {
    if (a == arcs) {
      std::vector<std::int64_t> balance(net.num_nodes(), 0);
      std::int64_t cost = 0;
      for (int i = 0; i < arcs; ++i) {
        balance[net.from(i)] -= flow[i];
        balance[net.to(i)] += flow[i];
        cost += flow[i] * net.cost(i);
      }
      for (int v = 0; v < net.num_nodes(); ++v) {
        const std::int64_t want =
            v == source ? -flow_value : (v == sink ? flow_value : 0);
        if (source == sink && v == source) {
          if (balance[v] != 0) return;
        } else if (balance[v] != want) {
          return;
        }
      }
      if (!found || cost < *best) *best = cost;
      found = true;
      return;
    }
    for (std::int64_t f = 0; f <= net.capacity(a); ++f) {
      flow[a] = f;
      visit(a + 1);
    }
    flow[a] = 0;
  };
  visit(0);
  return found;
}

std::vector<CacheState> AllStates(const CacheState& shape, bool single_copy) {
  const int n_count = shape.num_contents();
  const int m_count = shape.num_scbs();
  std::vector<CacheState> out;
  CacheState cur(n_count,
                 {shape.capacities().begin(), shape.capacities().end()},
                 {shape.sizes().begin(), shape.sizes().end()});
  // Decide every (n, m) cell in turn.
  std::function<void(int)> visit = [&](int cell) {
    if (cell == n_count * m_count) {
      if (cur.fits() && (!single_copy || cur.single_copy())) out.push_back(cur);
      return;
    }
    const int n = cell / m_count;
    const int m = cell % m_count;
    cur.set(n, m, false);
    visit(cell + 1);
    cur.set(n, m, true);
    if (cur.used(m) <= cur.capacity(m)) visit(cell + 1);
    cur.set(n, m, false);
  };
  visit(0);
  return out;
}

int Changes(const CacheState& a, const CacheState& b) {
  int changes = 0;
  for (int n = 0; n < a.num_contents(); ++n) {
    for (int m = 0; m < a.num_scbs(); ++m) {
      if (a.cached(n, m) != b.cached(n, m)) ++changes;
    }
  }
  return changes;
}

Cost OracleStageOptimum(const CacheState& prev,
                        std::span<const std::int64_t> weights,
                        const CostMatrix& costs, Cost gamma, bool single_copy) {
  Cost best = std::numeric_limits<Cost>::max();
  for (const CacheState& s : AllStates(prev, single_copy)) {
    best = std::min(
        best, gamma * Changes(prev, s) + OracleServingCost(s, weights, costs));
  }
  return best;
}

Cost OracleForwardSearch(const CacheState& shape,
                         const std::vector<std::vector<std::int64_t>>& demand,
                         const CostMatrix& costs, Cost gamma) {
  const std::vector<CacheState> states = AllStates(shape, false);
  const int horizon = static_cast<int>(demand.size());
  Cost best = std::numeric_limits<Cost>::max();
  std::vector<int> path;
  std::function<void(int, Cost)> visit = [&](int t, Cost so_far) {
    if (t > horizon) {
      best = std::min(best, so_far);
      return;
    }
    for (size_t s = 0; s < states.size(); ++s) {
      Cost c = so_far + OracleServingCost(states[s], demand[t - 1], costs);
      if (t >= 2) c += gamma * Changes(states[path.back()], states[s]);
      path.push_back(static_cast<int>(s));
      visit(t + 1, c);
      path.pop_back();
    }
  };
  visit(1, 0);
  return best;
}

CostMatrix RandomCostMatrix(int num_scbs, int num_users, std::mt19937_64& rng) {
  std::uniform_int_distribution<Cost> small(0, 9);
  std::uniform_int_distribution<Cost> big(10, 25);
  std::vector<Cost> entries;
  for (int u = 0; u < num_users; ++u) entries.push_back(big(rng));
  for (int m = 0; m < num_scbs; ++m) {
    for (int u = 0; u < num_users; ++u) entries.push_back(small(rng));
  }
  return CostMatrix(num_scbs, num_users, std::move(entries));
}

CacheState RandomState(int num_contents, const std::vector<std::int64_t>& caps,
                       bool single_copy, std::mt19937_64& rng) {
  CacheState s(num_contents, caps);
  std::bernoulli_distribution coin(0.5);
  for (int m = 0; m < s.num_scbs(); ++m) {
    for (int n = 0; n < num_contents; ++n) {
      if (!coin(rng)) continue;
      if (s.used(m) + s.size_of(n) > s.capacity(m)) continue;
      if (single_copy && s.copies(n) > 0) continue;
      s.set(n, m, true);
    }
  }
  return s;
}

}  // namespace edgecache::testing
