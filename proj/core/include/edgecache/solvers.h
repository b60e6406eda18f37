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

#ifndef EDGECACHE_SOLVERS_H_
#define EDGECACHE_SOLVERS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "edgecache/cache.h"
#include "edgecache/topology.h"

namespace edgecache {

// Fixed-point scale applied to real-valued demand weights (forecasts).
inline constexpr std::int64_t kWeightScale = 1000;

// One cache-update decision: choose the successor of `prev_state` that
// minimises gamma * (#adds + #evicts) + delivery cost under `weights`.
//
// Weights are in units of 1/weight_scale requests; with weight_scale == 1
// they are plain request counts and every objective is in cost units.
struct StageProblem {
  CacheState prev_state;
  std::vector<std::int64_t> weights;
  std::int64_t weight_scale = 1;
  CostMatrix costs;
  Cost gamma = 0;

  Cost scaled_gamma() const { return gamma * weight_scale; }
};

// Quantises real weights with kWeightScale.
StageProblem MakeStageProblem(CacheState prev_state,
                              std::span<const double> weights, CostMatrix costs,
                              Cost gamma);

// gamma * weight_scale * changes + ServingCost(successor).
Cost StageObjective(const StageProblem& problem, const CacheAction& action);

struct ExactOptions {
  // Branch-and-bound nodes explored before giving up with kInstanceTooLarge.
  std::int64_t node_budget = 5'000'000;
  // Multi-copy search enumerates 2^M placements per content.
  int max_multi_copy_scbs = 10;
};

// Exact optimum under the one-copy-per-content restriction, as a
// transportation problem solved with MinCostFlow. Among optimal actions the
// one with the fewest changes is returned. Requires unit sizes
// (kNonUnitSize) and a single-copy previous state (kMultiCopyState).
CacheAction SolveSingleCopyUpdate(const StageProblem& problem);

// Exact optimum by depth-first branch-and-bound over contents. Each content
// picks a set of SCBSs (at most one when !multi_copy); the bound relaxes
// capacity coupling into one fractional knapsack per SCBS over the
// per-copy savings, which dominate the true savings because copies are
// subadditive. Ties go to the fewest changes, then to the first solution in
// search order. Throws kInstanceTooLarge past the node budget.
CacheAction SolveExactUpdate(const StageProblem& problem, bool multi_copy,
                             const ExactOptions& options = {});

enum class PlacementMethod { kFlow, kBranchAndBound, kGreedy };

struct PlacementResult {
  CacheState state;
  PlacementMethod method = PlacementMethod::kGreedy;
  bool exact = false;
};

// One-shot placement into the empty caches of `shape` minimising delivery
// cost. Single copy with unit sizes uses the flow solver; otherwise
// branch-and-bound within the node budget, falling back to greedy copy
// augmentation.
PlacementResult SolveStaticPlacement(const CacheState& shape,
                                     std::span<const std::int64_t> weights,
                                     const CostMatrix& costs, bool multi_copy,
                                     const ExactOptions& options = {});

// Repeatedly adds the copy with the largest delivery-cost reduction until no
// copy fits or helps (lazy evaluation; gains only shrink as copies are
// added).
CacheState GreedyStaticPlacement(const CacheState& shape,
                                 std::span<const std::int64_t> weights,
                                 const CostMatrix& costs, bool multi_copy);

}  // namespace edgecache

#endif  // EDGECACHE_SOLVERS_H_
