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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "edgecache/error.h"
#include "oracles.h"

namespace edgecache {
namespace {

using testing::AllStates;
using testing::Changes;
using testing::OracleServingCost;
using testing::OracleStageOptimum;
using testing::RandomCostMatrix;
using testing::RandomState;

StageProblem Problem(CacheState prev, std::vector<std::int64_t> w,
                     CostMatrix costs, Cost gamma) {
  StageProblem p;
  p.prev_state = std::move(prev);
  p.weights = std::move(w);
  p.costs = std::move(costs);
  p.gamma = gamma;
  return p;
}

// Fewest changes among the optimal successors.
int OracleFewestChanges(const StageProblem& p, bool single_copy) {
  const Cost best = OracleStageOptimum(p.prev_state, p.weights, p.costs,
                                       p.scaled_gamma(), single_copy);
  int fewest = std::numeric_limits<int>::max();
  for (const CacheState& s : AllStates(p.prev_state, single_copy)) {
    const int ch = Changes(p.prev_state, s);
    if (p.scaled_gamma() * ch + OracleServingCost(s, p.weights, p.costs) ==
        best) {
      fewest = std::min(fewest, ch);
    }
  }
  return fewest;
}

struct Tiny {
  StageProblem problem;
};

Tiny RandomTiny(std::mt19937_64& rng, int max_n, int max_m, int max_b,
                bool single_copy_prev) {
  std::uniform_int_distribution<int> n_dist(1, max_n);
  std::uniform_int_distribution<int> m_dist(1, max_m);
  std::uniform_int_distribution<int> b_dist(0, max_b);
  std::uniform_int_distribution<std::int64_t> w_dist(0, 12);
  const int gammas[] = {0, 50, 100};
  const int n = n_dist(rng);
  const int m = m_dist(rng);
  std::vector<std::int64_t> caps(m);
  for (auto& b : caps) b = b_dist(rng);
  std::vector<std::int64_t> w(n);
  for (auto& x : w) x = w_dist(rng);
  const Cost gamma = gammas[std::uniform_int_distribution<int>(0, 2)(rng)];
  return {Problem(
      RandomState(n, caps, single_copy_prev, rng), w,
      RandomCostMatrix(m, std::uniform_int_distribution<int>(1, 3)(rng), rng),
      gamma)};
}

TEST(MakeStageProblemTest, ScalesWeightsAndGamma) {
  const CostMatrix c(1, 1, {20, 0});
  const std::vector<double> w = {1.5, 0.0004};
  const StageProblem p = MakeStageProblem(CacheState(2, {1}), w, c, 100);
  EXPECT_EQ(p.weights, (std::vector<std::int64_t>{1500, 0}));
  EXPECT_EQ(p.scaled_gamma(), 100 * kWeightScale);
  const std::vector<double> bad = {-1.0, 0.0};
  EXPECT_THROW(MakeStageProblem(CacheState(2, {1}), bad, c, 100), Error);
}

TEST(SingleCopyUpdateTest, HugePenaltyKeepsState) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(1, 2, 2, 20));
  CacheState prev(3, {1, 1});
  prev.set(2, 0, true);
  // max w * max savings = 9 * 38 < gamma
  const StageProblem p = Problem(prev, {9, 5, 0}, c, 1000);
  EXPECT_TRUE(SolveSingleCopyUpdate(p).empty());
}

TEST(SingleCopyUpdateTest, ZeroPenaltyFromEmptyPicksBestPairs) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(1, 2, 2, 20));
  const StageProblem p = Problem(CacheState(4, {1, 1}), {3, 9, 1, 7}, c, 0);
  const CacheAction a = SolveSingleCopyUpdate(p);
  const CacheState next = ApplyAction(p.prev_state, a);
  EXPECT_EQ(next.copies(1), 1);
  EXPECT_EQ(next.copies(3), 1);
  EXPECT_EQ(next.num_cached(), 2);
  EXPECT_EQ(StageObjective(p, a),
            OracleStageOptimum(p.prev_state, p.weights, c, 0, true));
}

TEST(SingleCopyUpdateTest, MatchesBruteForceOnRandomTinyInstances) {
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 600; ++i) {
    const Tiny t = RandomTiny(rng, 6, 2, 2, true);
    const StageProblem& p = t.problem;
    const CacheAction a = SolveSingleCopyUpdate(p);
    ASSERT_TRUE(IsFeasible(p.prev_state, a));
    const CacheState next = ApplyAction(p.prev_state, a);
    ASSERT_TRUE(next.single_copy());
    ASSERT_EQ(StageObjective(p, a), OracleStageOptimum(p.prev_state, p.weights,
                                                       p.costs, p.gamma, true))
        << "case " << i;
    ASSERT_EQ(a.num_changes(), OracleFewestChanges(p, true)) << "case " << i;
  }
}

TEST(SingleCopyUpdateTest, Preconditions) {
  const CostMatrix c(2, 1, {20, 0, 2});
  CacheState multi(2, {1, 1});
  multi.set(0, 0, true);
  multi.set(0, 1, true);
  try {
    SolveSingleCopyUpdate(Problem(multi, {1, 1}, c, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMultiCopyState);
  }
  const CacheState sized(2, {2, 2}, {2, 1});
  try {
    SolveSingleCopyUpdate(Problem(sized, {1, 1}, c, 0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonUnitSize);
  }
}

TEST(ExactUpdateTest, SingleScbsKnapsack) {
  const CostMatrix c(1, 1, {20, 0});
  const StageProblem p = Problem(CacheState(5, {2}), {4, 1, 9, 9, 2}, c, 0);
  const CacheState next = ApplyAction(p.prev_state, SolveExactUpdate(p, true));
  EXPECT_TRUE(next.cached(2, 0));
  EXPECT_TRUE(next.cached(3, 0));
  EXPECT_EQ(next.num_cached(), 2);
}

TEST(ExactUpdateTest, OptimalPreviousStateGivesEmptyAction) {
  const CostMatrix c(1, 1, {20, 0});
  CacheState prev(3, {1});
  prev.set(1, 0, true);
  const StageProblem p = Problem(prev, {1, 5, 2}, c, 10);
  EXPECT_TRUE(SolveExactUpdate(p, true).empty());
  EXPECT_TRUE(SolveExactUpdate(p, false).empty());
}

TEST(ExactUpdateTest, SingleCopyModeMatchesFlowSolver) {
  std::mt19937_64 rng(31415);
  for (int i = 0; i < 600; ++i) {
    const Tiny t = RandomTiny(rng, 6, 2, 2, true);
    const CacheAction flow = SolveSingleCopyUpdate(t.problem);
    const CacheAction exact = SolveExactUpdate(t.problem, false);
    ASSERT_TRUE(IsFeasible(t.problem.prev_state, exact));
    ASSERT_TRUE(ApplyAction(t.problem.prev_state, exact).single_copy());
    ASSERT_EQ(StageObjective(t.problem, exact), StageObjective(t.problem, flow))
        << "case " << i;
    ASSERT_EQ(exact.num_changes(), flow.num_changes()) << "case " << i;
  }
}

TEST(ExactUpdateTest, MultiCopyMatchesEnumeration) {
  std::mt19937_64 rng(1618);
  for (int i = 0; i < 500; ++i) {
    const Tiny t = RandomTiny(rng, 4, 3, 2, false);
    const StageProblem& p = t.problem;
    const CacheAction a = SolveExactUpdate(p, true);
    ASSERT_TRUE(IsFeasible(p.prev_state, a));
    ASSERT_EQ(StageObjective(p, a), OracleStageOptimum(p.prev_state, p.weights,
                                                       p.costs, p.gamma, false))
        << "case " << i;
    ASSERT_EQ(a.num_changes(), OracleFewestChanges(p, false)) << "case " << i;
    // Never worse than doing nothing.
    ASSERT_LE(StageObjective(p, a), StageObjective(p, {}));
  }
}

TEST(ExactUpdateTest, SingleCopyModeFromMultiCopyState) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const Tiny t = RandomTiny(rng, 4, 3, 2, false);
    const StageProblem& p = t.problem;
    const CacheAction a = SolveExactUpdate(p, false);
    ASSERT_TRUE(ApplyAction(p.prev_state, a).single_copy());
    ASSERT_EQ(StageObjective(p, a), OracleStageOptimum(p.prev_state, p.weights,
                                                       p.costs, p.gamma, true));
  }
}

TEST(ExactUpdateTest, NonUnitSizes) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::int64_t> size(1, 3);
  for (int i = 0; i < 200; ++i) {
    const CostMatrix c = RandomCostMatrix(2, 2, rng);
    std::vector<std::int64_t> sizes(4);
    for (auto& s : sizes) s = size(rng);
    CacheState prev(4, {3, 4}, sizes);
    // random feasible start
    for (int n = 0; n < 4; ++n) {
      for (int m = 0; m < 2; ++m) {
        if (rng() % 2 && prev.used(m) + sizes[n] <= prev.capacity(m)) {
          prev.set(n, m, true);
        }
      }
    }
    const std::vector<std::int64_t> w = {static_cast<std::int64_t>(rng() % 9),
                                         static_cast<std::int64_t>(rng() % 9),
                                         static_cast<std::int64_t>(rng() % 9),
                                         static_cast<std::int64_t>(rng() % 9)};
    const StageProblem p = Problem(prev, w, c, 30);
    const CacheAction a = SolveExactUpdate(p, true);
    ASSERT_TRUE(IsFeasible(prev, a));
    ASSERT_EQ(StageObjective(p, a), OracleStageOptimum(prev, w, c, 30, false));
  }
}

TEST(ExactUpdateTest, NodeBudgetGuard) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(1, 3, 2, 20));
  std::vector<std::int64_t> w(30);
  for (int n = 0; n < 30; ++n) w[n] = 30 - n;
  const StageProblem p = Problem(CacheState(30, {5, 5, 5}), w, c, 100);
  ExactOptions tight;
  tight.node_budget = 10;
  try {
    SolveExactUpdate(p, true, tight);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
  ExactOptions few_scbs;
  few_scbs.max_multi_copy_scbs = 2;
  EXPECT_THROW(SolveExactUpdate(p, true, few_scbs), Error);
  EXPECT_NO_THROW(SolveExactUpdate(p, false, few_scbs));
}

TEST(StaticPlacementTest, ZeroCapacity) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(1, 3, 2, 20));
  const CacheState shape(4, {0, 0, 0});
  const std::vector<std::int64_t> w = {1, 2, 3, 4};
  for (bool multi : {false, true}) {
    const PlacementResult r = SolveStaticPlacement(shape, w, c, multi);
    EXPECT_EQ(r.state.num_cached(), 0);
    EXPECT_EQ(ServingCost(r.state, w, c), 10 * 60);
  }
}

TEST(StaticPlacementTest, SaturationCachesEverythingEverywhere) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(1, 3, 2, 20));
  const CacheState shape(4, {4, 4, 4});
  const std::vector<std::int64_t> w = {1, 2, 3, 4};
  const PlacementResult r = SolveStaticPlacement(shape, w, c, true);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(ServingCost(r.state, w, c), 0);
  EXPECT_EQ(r.state.num_cached(), 12);
  EXPECT_EQ(ServingCost(GreedyStaticPlacement(shape, w, c, true), w, c), 0);
}

TEST(StaticPlacementTest, ExactMatchesEnumerationAndGreedyGap) {
  std::mt19937_64 rng(8080);
  double worst_gap = 0.0;
  for (int i = 0; i < 300; ++i) {
    const Tiny t = RandomTiny(rng, 4, 3, 2, false);
    const CacheState shape(t.problem.prev_state.num_contents(),
                           {t.problem.prev_state.capacities().begin(),
                            t.problem.prev_state.capacities().end()});
    const auto& w = t.problem.weights;
    const auto& c = t.problem.costs;
    for (bool multi : {false, true}) {
      const PlacementResult r = SolveStaticPlacement(shape, w, c, multi);
      ASSERT_TRUE(r.exact);
      ASSERT_EQ(r.method, multi ? PlacementMethod::kBranchAndBound
                                : PlacementMethod::kFlow);
      const Cost best = OracleStageOptimum(shape, w, c, 0, !multi);
      ASSERT_EQ(ServingCost(r.state, w, c), best);
      const CacheState g = GreedyStaticPlacement(shape, w, c, multi);
      ASSERT_TRUE(g.fits());
      if (!multi) ASSERT_TRUE(g.single_copy());
      const Cost gc = ServingCost(g, w, c);
      ASSERT_GE(gc, best);
      if (best > 0) {
        worst_gap = std::max(worst_gap, static_cast<double>(gc - best) / best);
      }
    }
  }
  RecordProperty("worst_greedy_gap", std::to_string(worst_gap));
  std::cout << "worst greedy placement gap: " << worst_gap << "\n";
}

TEST(StaticPlacementTest, FallsBackToGreedyWhenTooLarge) {
  const CostMatrix c = BuildCostMatrix(BuildGrid(3, 4, 2, 20));
  std::vector<std::int64_t> w(50);
  for (int n = 0; n < 50; ++n) w[n] = 100 - n;
  const CacheState shape(50, std::vector<std::int64_t>(12, 3));
  const PlacementResult r = SolveStaticPlacement(shape, w, c, true);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.method, PlacementMethod::kGreedy);
  EXPECT_TRUE(r.state.fits());
}

}  // namespace
}  // namespace edgecache
