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

#ifndef EDGECACHE_BACKWARD_INDUCTION_H_
#define EDGECACHE_BACKWARD_INDUCTION_H_

#include <cstdint>
#include <vector>

#include "edgecache/cache.h"
#include "edgecache/topology.h"

namespace edgecache {

// Finite-horizon caching problem with a known demand sequence.
struct HorizonProblem {
  // Only the shape (contents, capacities, sizes) is used.
  CacheState shape;
  // demand[t - 1][n], integral and in the same units as `gamma`.
  std::vector<std::vector<std::int64_t>> demand;
  CostMatrix costs;
  Cost gamma = 0;

  int num_stages() const { return static_cast<int>(demand.size()); }
};

struct BackwardInductionOptions {
  // Upper bound on the number of cache configurations per stage.
  std::uint64_t max_states = 100'000;
};

struct BackwardInductionResult {
  std::vector<CacheState> states;
  // value[t][s] is the optimal cost of stages t+1..T when stage t ends in
  // states[s]; t runs over 1..T and value[T] is all zeros.
  std::vector<std::vector<Cost>> value;
  // next_state[t][s] is the optimal configuration at stage t given
  // states[s] at stage t - 1, for t in 2..T.
  std::vector<std::vector<int>> next_state;
  // Free placement at stage 1.
  int initial_state = 0;
  Cost optimal_cost = 0;

  int num_stages() const { return static_cast<int>(value.size()) - 1; }
  // State index per stage 1..T (index 0 unused).
  std::vector<int> OptimalPath() const;
  CacheAction ActionAt(int t, int s) const;
};

BackwardInductionResult BackwardInduction(
    const HorizonProblem& problem,
    const BackwardInductionOptions& options = {});

// Cost of following `path` (state index per stage 1..T, entry 0 unused):
// serving cost at every stage plus gamma per change from stage 2 on.
Cost PathCost(const HorizonProblem& problem,
              const BackwardInductionResult& result,
              const std::vector<int>& path);

}  // namespace edgecache

#endif  // EDGECACHE_BACKWARD_INDUCTION_H_
