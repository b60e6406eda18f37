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

#include "edgecache/backward_induction.h"

#include <bit>
#include <limits>
#include <string>
#include <tuple>

#include "edgecache/error.h"

namespace edgecache {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;
namespace {

// Content sets that fit one SCBS, as bitmasks over contents.
void EnumerateSubsets(const CacheState& shape, int m, int from,
                      std::uint64_t mask, std::int64_t used,
                      std::uint64_t limit, std::vector<std::uint64_t>* out) {
  out->push_back(mask);
  Require(out->size() <= limit, ErrorCode::kInstanceTooLarge,
          "too many cache configurations for backward induction");
  for (int n = from; n < shape.num_contents(); ++n) {
    if (used + shape.size_of(n) > shape.capacity(m)) continue;
    EnumerateSubsets(shape, m, n + 1, mask | (std::uint64_t{1} << n),
                     used + shape.size_of(n), limit, out);
  }
}

struct Entry {
  Cost cost = std::numeric_limits<Cost>::max();
  std::int64_t changes = 0;
  int arg = -1;

  bool operator<(const Entry& o) const {
    return std::tie(cost, changes, arg) < std::tie(o.cost, o.changes, o.arg);
  }
};

}  // namespace

std::vector<int> BackwardInductionResult::OptimalPath() const {
  std::vector<int> path(num_stages() + 1, 0);
  if (num_stages() == 0) return path;
  path[1] = initial_state;
  for (int t = 2; t <= num_stages(); ++t) {
    path[t] = next_state[t][path[t - 1]];
  }
  return path;
}

CacheAction BackwardInductionResult::ActionAt(int t, int s) const {
  Require(t >= 2 && t <= num_stages(), ErrorCode::kIndexOutOfRange,
          "actions exist for stages 2..T");
  return ActionBetween(states[s], states[next_state[t][s]]);
}

BackwardInductionResult BackwardInduction(
    const HorizonProblem& problem, const BackwardInductionOptions& options) {
  const CacheState& shape = problem.shape;
  const int n_count = shape.num_contents();
  const int m_count = shape.num_scbs();
  const int horizon = problem.num_stages();
  Require(n_count <= 63, ErrorCode::kInstanceTooLarge,
          "backward induction supports at most 63 contents");
  Require(m_count <= 16, ErrorCode::kInstanceTooLarge,
          "backward induction supports at most 16 SCBSs");
  Require(problem.costs.num_scbs() == m_count, ErrorCode::kInvalidParameter,
          "cost matrix and state disagree on the SCBS count");
  Require(problem.gamma >= 0, ErrorCode::kInvalidParameter,
          "gamma must be >= 0");
  for (const auto& row : problem.demand) {
    Require(static_cast<int>(row.size()) == n_count,
            ErrorCode::kInvalidParameter, "one demand value per content");
    for (std::int64_t w : row) {
      Require(w >= 0, ErrorCode::kInvalidParameter, "demand must be >= 0");
    }
  }

  std::vector<std::vector<std::uint64_t>> subsets(m_count);
  std::vector<std::uint64_t> stride(m_count + 1, 1);
  for (int m = 0; m < m_count; ++m) {
    EnumerateSubsets(shape, m, 0, 0, 0, options.max_states, &subsets[m]);
    const UInt128 next = static_cast<UInt128>(stride[m]) * subsets[m].size();
    Require(next <= options.max_states, ErrorCode::kInstanceTooLarge,
            "state space exceeds " + std::to_string(options.max_states));
    stride[m + 1] = static_cast<std::uint64_t>(next);
  }
  const int s_count = static_cast<int>(stride[m_count]);

  BackwardInductionResult result;
  result.states.reserve(s_count);
  // copy masks per state and content, used for serving costs
  std::vector<std::uint64_t> copy_masks(static_cast<size_t>(s_count) * n_count);
  for (int s = 0; s < s_count; ++s) {
    CacheState state(n_count,
                     {shape.capacities().begin(), shape.capacities().end()},
                     {shape.sizes().begin(), shape.sizes().end()});
    for (int m = 0; m < m_count; ++m) {
      const std::uint64_t set = subsets[m][(s / stride[m]) % subsets[m].size()];
      for (std::uint64_t bits = set; bits != 0; bits &= bits - 1) {
        const int n = std::countr_zero(bits);
        state.set(n, m, true);
        copy_masks[static_cast<size_t>(s) * n_count + n] |= std::uint64_t{1}
                                                            << m;
      }
    }
    result.states.push_back(std::move(state));
  }

  // Delivery cost per request for each set of SCBSs holding a content.
  const int u_count = problem.costs.num_users();
  std::vector<Cost> set_cost(size_t{1} << m_count, 0);
  for (size_t mask = 0; mask < set_cost.size(); ++mask) {
    for (int u = 0; u < u_count; ++u) {
      Cost best = problem.costs.mcbs(u);
      for (int m = 0; m < m_count; ++m) {
        if (mask >> m & 1) best = std::min(best, problem.costs.scbs(m, u));
      }
      set_cost[mask] += best;
    }
  }
  auto serve = [&](int t, int s) {
    Cost total = 0;
    const auto& w = problem.demand[t - 1];
    for (int n = 0; n < n_count; ++n) {
      total +=
          w[n] * set_cost[copy_masks[static_cast<size_t>(s) * n_count + n]];
    }
    return total;
  };

  result.value.assign(horizon + 1, std::vector<Cost>(s_count, 0));
  result.next_state.assign(horizon + 1, {});
  if (horizon == 0) return result;

  std::vector<std::int64_t> changes_to_go(s_count, 0);
  std::vector<Entry> cur(s_count);
  std::vector<Entry> next(s_count);
  for (int t = horizon; t >= 2; --t) {
    for (int s = 0; s < s_count; ++s) {
      cur[s] = {serve(t, s) + result.value[t][s], changes_to_go[s], s};
    }
    // The change count is a sum over SCBSs, so the minimum over successor
    // states factors into one pass per SCBS.
    for (int m = 0; m < m_count; ++m) {
      const auto& sets = subsets[m];
      const int k_count = static_cast<int>(sets.size());
      const std::int64_t step = static_cast<std::int64_t>(stride[m]);
      for (int s = 0; s < s_count; ++s) {
        const int from = static_cast<int>((s / stride[m]) % k_count);
        const std::int64_t base = s - from * step;
        Entry best;
        for (int k = 0; k < k_count; ++k) {
          const Entry& e = cur[base + k * step];
          const int ham = std::popcount(sets[from] ^ sets[k]);
          const Entry cand{e.cost + problem.gamma * ham, e.changes + ham,
                           e.arg};
          if (cand < best) best = cand;
        }
        next[s] = best;
      }
      cur.swap(next);
    }
    result.next_state[t].resize(s_count);
    for (int s = 0; s < s_count; ++s) {
      result.value[t - 1][s] = cur[s].cost;
      changes_to_go[s] = cur[s].changes;
      result.next_state[t][s] = cur[s].arg;
    }
  }
  Entry first;
  for (int s = 0; s < s_count; ++s) {
    const Entry e{serve(1, s) + result.value[1][s], changes_to_go[s], s};
    if (e < first) first = e;
  }
  result.initial_state = first.arg;
  result.optimal_cost = first.cost;
  return result;
}

Cost PathCost(const HorizonProblem& problem,
              const BackwardInductionResult& result,
              const std::vector<int>& path) {
  Require(static_cast<int>(path.size()) == problem.num_stages() + 1,
          ErrorCode::kInvalidParameter, "path needs one state per stage");
  Cost total = 0;
  for (int t = 1; t <= problem.num_stages(); ++t) {
    const CacheState& s = result.states[path[t]];
    total += ServingCost(s, problem.demand[t - 1], problem.costs);
    if (t >= 2) {
      total += UpdatePenalty(ActionBetween(result.states[path[t - 1]], s),
                             problem.gamma);
    }
  }
  return total;
}

}  // namespace edgecache
