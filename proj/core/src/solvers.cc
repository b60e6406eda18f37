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

#include "edgecache/solvers.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>

#include "edgecache/error.h"
#include "edgecache/flow.h"

namespace edgecache {

__extension__ typedef __int128 Int128;
__extension__ typedef unsigned __int128 UInt128;

StageProblem MakeStageProblem(CacheState prev_state,
                              std::span<const double> weights, CostMatrix costs,
                              Cost gamma) {
  Require(static_cast<int>(weights.size()) == prev_state.num_contents(),
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Require(gamma >= 0, ErrorCode::kInvalidParameter, "gamma must be >= 0");
  StageProblem p;
  p.weights.reserve(weights.size());
  for (double w : weights) {
    Require(std::isfinite(w) && w >= 0.0, ErrorCode::kInvalidParameter,
            "weights must be finite and nonnegative");
    p.weights.push_back(std::llround(w * kWeightScale));
  }
  p.prev_state = std::move(prev_state);
  p.weight_scale = kWeightScale;
  p.costs = std::move(costs);
  p.gamma = gamma;
  return p;
}

Cost StageObjective(const StageProblem& problem, const CacheAction& action) {
  const CacheState next = ApplyAction(problem.prev_state, action);
  return problem.scaled_gamma() * action.num_changes() +
         ServingCost(next, problem.weights, problem.costs);
}

namespace {

CacheState EmptyLike(const CacheState& shape) {
  return CacheState(shape.num_contents(),
                    {shape.capacities().begin(), shape.capacities().end()},
                    {shape.sizes().begin(), shape.sizes().end()});
}

void CheckProblem(const StageProblem& p) {
  Require(static_cast<int>(p.weights.size()) == p.prev_state.num_contents(),
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Require(p.costs.num_scbs() == p.prev_state.num_scbs(),
          ErrorCode::kInvalidParameter,
          "cost matrix and state disagree on the SCBS count");
  Require(p.gamma >= 0 && p.weight_scale >= 1, ErrorCode::kInvalidParameter,
          "gamma must be >= 0 and weight_scale >= 1");
  for (std::int64_t w : p.weights) {
    Require(w >= 0, ErrorCode::kInvalidParameter, "weights must be >= 0");
  }
  Require(p.prev_state.fits(), ErrorCode::kInvalidParameter,
          "previous state exceeds a capacity");
}

// Delivery cost per request for every set of SCBSs holding a content.
std::vector<Cost> SubsetDeliveryCosts(const CostMatrix& costs, int m_count) {
  const int u_count = costs.num_users();
  const size_t masks = size_t{1} << m_count;
  std::vector<Cost> best(masks * u_count);
  std::vector<Cost> total(masks, 0);
  for (int u = 0; u < u_count; ++u) best[u] = costs.mcbs(u);
  total[0] = costs.mcbs_total();
  for (size_t mask = 1; mask < masks; ++mask) {
    const int low = std::countr_zero(mask);
    const size_t rest = mask & (mask - 1);
    for (int u = 0; u < u_count; ++u) {
      const Cost v = std::min(best[rest * u_count + u], costs.scbs(low, u));
      best[mask * u_count + u] = v;
      total[mask] += v;
    }
  }
  return total;
}

class ExactSearch {
 public:
  ExactSearch(const StageProblem& p, bool multi_copy,
              const ExactOptions& options)
      : problem_(p), multi_copy_(multi_copy), options_(options) {}

  CacheAction Run();

 private:
  struct Candidate {
    int content = 0;
    std::uint64_t prev = 0;
    std::int64_t size = 1;
    Cost empty_cost = 0;
    std::vector<Cost> gain;  // f(empty) - f({m})
    std::vector<std::pair<Cost, std::uint64_t>> options;
  };

  Cost SetCost(std::uint64_t mask) const;
  Cost SavingsBound(size_t depth) const;
  void Dive(size_t depth, Cost objective, int changes);

  const StageProblem& problem_;
  bool multi_copy_;
  ExactOptions options_;
  int m_count_ = 0;
  std::vector<Cost> subset_cost_;
  std::vector<Candidate> active_;
  std::vector<Cost> suffix_empty_;
  // Savings if every remaining content took its best set, capacity ignored.
  std::vector<Cost> suffix_free_;
  std::vector<std::vector<size_t>> by_gain_;
  std::vector<std::int64_t> used_;
  std::vector<std::uint64_t> choice_;
  std::vector<std::uint64_t> best_choice_;
  Cost best_objective_ = std::numeric_limits<Cost>::max();
  int best_changes_ = std::numeric_limits<int>::max();
  std::int64_t nodes_ = 0;
};

Cost ExactSearch::SetCost(std::uint64_t mask) const {
  if (multi_copy_) return subset_cost_[mask];
  if (mask == 0) return problem_.costs.mcbs_total();
  return problem_.costs.mcbs_total() -
         problem_.costs.savings(std::countr_zero(mask));
}

Cost ExactSearch::SavingsBound(size_t depth) const {
  Cost bound = 0;
  for (int m = 0; m < m_count_; ++m) {
    std::int64_t room = problem_.prev_state.capacity(m) - used_[m];
    for (size_t pos : by_gain_[m]) {
      if (room <= 0) break;
      if (pos < depth) continue;
      const Candidate& c = active_[pos];
      if (c.size <= room) {
        bound += c.gain[m];
        room -= c.size;
      } else {
        bound += (c.gain[m] * room + c.size - 1) / c.size;
        break;
      }
    }
  }
  return bound;
}

void ExactSearch::Dive(size_t depth, Cost objective, int changes) {
  if (++nodes_ > options_.node_budget) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "exact stage solver exceeded its node budget of " +
                    std::to_string(options_.node_budget));
  }
  if (depth == active_.size()) {
    if (std::tie(objective, changes) <
        std::tie(best_objective_, best_changes_)) {
      best_objective_ = objective;
      best_changes_ = changes;
      best_choice_ = choice_;
    }
    return;
  }
  const Candidate& c = active_[depth];
  for (const auto& [cost, mask] : c.options) {
    bool fits = true;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      const int m = std::countr_zero(bits);
      if (used_[m] + c.size > problem_.prev_state.capacity(m)) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      used_[std::countr_zero(bits)] += c.size;
    }
    const Cost child = objective + cost;
    const int child_changes = changes + std::popcount(mask ^ c.prev);
    const Cost bound =
        child + suffix_empty_[depth + 1] -
        std::min(SavingsBound(depth + 1), suffix_free_[depth + 1]);
    if (std::tie(bound, child_changes) <
        std::tie(best_objective_, best_changes_)) {
      choice_[depth] = mask;
      Dive(depth + 1, child, child_changes);
    }
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      used_[std::countr_zero(bits)] -= c.size;
    }
  }
}

CacheAction ExactSearch::Run() {
  CheckProblem(problem_);
  const CacheState& prev = problem_.prev_state;
  m_count_ = prev.num_scbs();
  Require(m_count_ <= 62, ErrorCode::kInstanceTooLarge,
          "too many SCBSs for the exact solver");
  if (multi_copy_) {
    Require(m_count_ <= options_.max_multi_copy_scbs,
            ErrorCode::kInstanceTooLarge,
            "multi-copy exact search is limited to " +
                std::to_string(options_.max_multi_copy_scbs) + " SCBSs");
    subset_cost_ = SubsetDeliveryCosts(problem_.costs, m_count_);
  }
  const Cost gamma = problem_.scaled_gamma();
  const int n_count = prev.num_contents();

  Cost fixed_cost = 0;
  Cost keep_all = 0;
  bool keep_all_feasible = multi_copy_ || prev.single_copy();
  std::vector<std::uint64_t> option_masks;
  if (multi_copy_) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m_count_); ++x) {
      option_masks.push_back(x);
    }
  } else {
    option_masks.push_back(0);
    for (int m = 0; m < m_count_; ++m) {
      option_masks.push_back(std::uint64_t{1} << m);
    }
  }

  for (int n = 0; n < n_count; ++n) {
    Candidate c;
    c.content = n;
    c.prev = prev.copy_mask(n);
    c.size = prev.size_of(n);
    const std::int64_t w = problem_.weights[n];
    auto f = [&](std::uint64_t x) {
      return gamma * std::popcount(x ^ c.prev) + w * SetCost(x);
    };
    c.empty_cost = f(0);
    c.gain.resize(m_count_);
    bool any_gain = false;
    for (int m = 0; m < m_count_; ++m) {
      c.gain[m] = c.empty_cost - f(std::uint64_t{1} << m);
      any_gain = any_gain || c.gain[m] > 0;
    }
    if (keep_all_feasible) keep_all += f(c.prev);
    // Nothing cached and no single copy pays off: by subadditivity no set
    // does either, and staying empty costs no capacity or changes.
    if (c.prev == 0 && !any_gain) {
      fixed_cost += c.empty_cost;
      continue;
    }
    for (std::uint64_t x : option_masks) {
      if (multi_copy_ || std::popcount(x) <= 1) c.options.push_back({f(x), x});
    }
    std::sort(c.options.begin(), c.options.end(),
              [&](const auto& a, const auto& b) {
                const int ca = std::popcount(a.second ^ c.prev);
                const int cb = std::popcount(b.second ^ c.prev);
                return std::tie(a.first, ca, a.second) <
                       std::tie(b.first, cb, b.second);
              });
    active_.push_back(std::move(c));
  }

  std::stable_sort(active_.begin(), active_.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return *std::max_element(a.gain.begin(), a.gain.end()) >
                            *std::max_element(b.gain.begin(), b.gain.end());
                   });
  suffix_empty_.assign(active_.size() + 1, 0);
  suffix_free_.assign(active_.size() + 1, 0);
  for (size_t i = active_.size(); i-- > 0;) {
    suffix_empty_[i] = suffix_empty_[i + 1] + active_[i].empty_cost;
    suffix_free_[i] = suffix_free_[i + 1] + active_[i].empty_cost -
                      active_[i].options.front().first;
  }
  by_gain_.assign(m_count_, {});
  for (int m = 0; m < m_count_; ++m) {
    for (size_t i = 0; i < active_.size(); ++i) {
      if (active_[i].gain[m] > 0) by_gain_[m].push_back(i);
    }
    // Highest gain per capacity unit first (cross-multiplied, exact).
    std::stable_sort(
        by_gain_[m].begin(), by_gain_[m].end(), [&](size_t a, size_t b) {
          return static_cast<Int128>(active_[a].gain[m]) * active_[b].size >
                 static_cast<Int128>(active_[b].gain[m]) * active_[a].size;
        });
  }

  used_.assign(m_count_, 0);
  choice_.assign(active_.size(), 0);
  if (keep_all_feasible) {
    best_objective_ = keep_all - fixed_cost;
    best_changes_ = 0;
    for (size_t i = 0; i < active_.size(); ++i) choice_[i] = active_[i].prev;
    best_choice_ = choice_;
  }
  // Fixed contents add the same constant to every solution.
  Dive(0, 0, 0);

  CacheAction action;
  for (size_t i = 0; i < active_.size(); ++i) {
    const Candidate& c = active_[i];
    const std::uint64_t x = best_choice_[i];
    for (int m = 0; m < m_count_; ++m) {
      const std::uint64_t bit = std::uint64_t{1} << m;
      if ((x & bit) && !(c.prev & bit)) action.adds.push_back({c.content, m});
      if (!(x & bit) && (c.prev & bit)) action.evicts.push_back({c.content, m});
    }
  }
  action.Normalize();
  return action;
}

}  // namespace

CacheAction SolveExactUpdate(const StageProblem& problem, bool multi_copy,
                             const ExactOptions& options) {
  ExactSearch search(problem, multi_copy, options);
  return search.Run();
}

CacheAction SolveSingleCopyUpdate(const StageProblem& problem) {
  CheckProblem(problem);
  const CacheState& prev = problem.prev_state;
  Require(prev.unit_sizes(), ErrorCode::kNonUnitSize,
          "the single-copy flow formulation needs unit content sizes");
  Require(prev.single_copy(), ErrorCode::kMultiCopyState,
          "the single-copy flow formulation needs a single-copy state");
  const int n_count = prev.num_contents();
  const int m_count = prev.num_scbs();
  const Cost gamma = problem.scaled_gamma();

  // Arc costs are scaled by `tie` and carry the change count in the low
  // digits, so the flow optimum is lexicographic in (objective, changes).
  Int128 largest = 0;
  for (int n = 0; n < n_count; ++n) {
    for (int m = 0; m < m_count; ++m) {
      const Int128 v =
          static_cast<Int128>(problem.weights[n]) * problem.costs.savings(m) +
          2 * static_cast<Int128>(gamma);
      largest = std::max(largest, v);
    }
  }
  const Int128 limit = static_cast<Int128>(1) << 60;
  std::int64_t tie = 2 * static_cast<std::int64_t>(n_count) + 1;
  if ((largest + 1) * tie * std::max(n_count, 1) >= limit) tie = 1;
  Require(largest * std::max(n_count, 1) < limit, ErrorCode::kOverflow,
          "stage weights too large for the flow formulation");

  const int source = 0;
  const int first_scbs = n_count + 1;
  const int uncached = n_count + m_count + 1;
  const int sink = n_count + m_count + 2;
  FlowNetwork net(n_count + m_count + 3);

  struct Route {
    int arc;
    int scbs;  // -1 for uncached
  };
  std::vector<std::vector<Route>> routes(n_count);
  for (int n = 0; n < n_count; ++n) {
    const std::uint64_t pm = prev.copy_mask(n);
    const int home = pm == 0 ? -1 : std::countr_zero(pm);
    net.AddArc(source, n + 1, 1, 0);
    const std::int64_t leave_changes = home >= 0 ? 1 : 0;
    const std::int64_t leave_cost =
        (home >= 0 ? gamma : 0) * tie + leave_changes;
    routes[n].push_back({net.AddArc(n + 1, uncached, 1, leave_cost), -1});
    for (int m = 0; m < m_count; ++m) {
      const std::int64_t changes = home == m ? 0 : (home < 0 ? 1 : 2);
      const std::int64_t cost =
          (-problem.weights[n] * problem.costs.savings(m) + gamma * changes) *
              tie +
          changes;
      // An SCBS route no cheaper than staying uncached is never needed:
      // dropping it frees capacity without raising the objective.
      if (cost >= leave_cost) continue;
      routes[n].push_back({net.AddArc(n + 1, first_scbs + m, 1, cost), m});
    }
  }
  for (int m = 0; m < m_count; ++m) {
    net.AddArc(first_scbs + m, sink, prev.capacity(m), 0);
  }
  net.AddArc(uncached, sink, n_count, 0);

  const FlowSolution flow = MinCostFlow(net, source, sink, n_count);
  CacheAction action;
  for (int n = 0; n < n_count; ++n) {
    const std::uint64_t pm = prev.copy_mask(n);
    const int home = pm == 0 ? -1 : std::countr_zero(pm);
    int target = -1;
    for (const Route& r : routes[n]) {
      if (flow.arc_flow[r.arc] > 0) target = r.scbs;
    }
    if (target == home) continue;
    if (home >= 0) action.evicts.push_back({n, home});
    if (target >= 0) action.adds.push_back({n, target});
  }
  action.Normalize();
  return action;
}

CacheState GreedyStaticPlacement(const CacheState& shape,
                                 std::span<const std::int64_t> weights,
                                 const CostMatrix& costs, bool multi_copy) {
  CacheState state = EmptyLike(shape);
  Require(static_cast<int>(weights.size()) == state.num_contents(),
          ErrorCode::kInvalidParameter, "one weight per content is required");
  const int m_count = state.num_scbs();
  const int u_count = costs.num_users();
  // Current per-user delivery cost of every content.
  std::vector<Cost> reach(static_cast<size_t>(state.num_contents()) * u_count);
  for (int n = 0; n < state.num_contents(); ++n) {
    for (int u = 0; u < u_count; ++u) reach[n * u_count + u] = costs.mcbs(u);
  }
  auto gain = [&](int n, int m) {
    Cost g = 0;
    for (int u = 0; u < u_count; ++u) {
      g += std::max<Cost>(0, reach[n * u_count + u] - costs.scbs(m, u));
    }
    return g * weights[n];
  };

  // (gain, -content, -scbs): max-heap order prefers low indices on ties.
  using Entry = std::tuple<Cost, int, int>;
  std::priority_queue<Entry> heap;
  for (int n = 0; n < state.num_contents(); ++n) {
    if (weights[n] <= 0) continue;
    for (int m = 0; m < m_count; ++m) {
      if (state.size_of(n) > state.capacity(m)) continue;
      const Cost g = gain(n, m);
      if (g > 0) heap.push({g, -n, -m});
    }
  }
  while (!heap.empty()) {
    const auto [stored, neg_n, neg_m] = heap.top();
    heap.pop();
    const int n = -neg_n;
    const int m = -neg_m;
    if (!multi_copy && state.copies(n) > 0) continue;
    if (state.used(m) + state.size_of(n) > state.capacity(m)) continue;
    const Cost g = gain(n, m);
    if (g <= 0) continue;
    if (g < stored) {
      heap.push({g, neg_n, neg_m});
      continue;
    }
    state.set(n, m, true);
    for (int u = 0; u < u_count; ++u) {
      reach[n * u_count + u] =
          std::min(reach[n * u_count + u], costs.scbs(m, u));
    }
  }
  return state;
}

PlacementResult SolveStaticPlacement(const CacheState& shape,
                                     std::span<const std::int64_t> weights,
                                     const CostMatrix& costs, bool multi_copy,
                                     const ExactOptions& options) {
  StageProblem problem;
  problem.prev_state = EmptyLike(shape);
  problem.weights.assign(weights.begin(), weights.end());
  problem.costs = costs;
  problem.gamma = 0;
  CheckProblem(problem);

  if (!multi_copy && problem.prev_state.unit_sizes()) {
    const CacheAction action = SolveSingleCopyUpdate(problem);
    return {ApplyAction(problem.prev_state, action), PlacementMethod::kFlow,
            true};
  }
  if (!multi_copy || shape.num_scbs() <= options.max_multi_copy_scbs) {
    try {
      const CacheAction action = SolveExactUpdate(problem, multi_copy, options);
      return {ApplyAction(problem.prev_state, action),
              PlacementMethod::kBranchAndBound, true};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInstanceTooLarge) throw;
    }
  }
  return {GreedyStaticPlacement(shape, weights, costs, multi_copy),
          PlacementMethod::kGreedy, false};
}

}  // namespace edgecache
