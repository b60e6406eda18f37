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

#include <gtest/gtest.h>

#include <random>

#include "edgecache/error.h"
#include "oracles.h"

namespace edgecache {
namespace {

TEST(MinCostFlowTest, SingleArc) {
  FlowNetwork net(2);
  net.AddArc(0, 1, 5, 3);
  const FlowSolution s = MinCostFlow(net, 0, 1, 5);
  EXPECT_EQ(s.total_cost, 15);
  EXPECT_EQ(s.arc_flow[0], 5);
}

TEST(MinCostFlowTest, ParallelArcs) {
  FlowNetwork net(2);
  net.AddArc(0, 1, 1, 1);
  net.AddArc(0, 1, 1, 2);
  EXPECT_EQ(MinCostFlow(net, 0, 1, 2).total_cost, 3);
  EXPECT_EQ(MinCostFlow(net, 0, 1, 1).total_cost, 1);
}

TEST(MinCostFlowTest, NegativeArcCosts) {
  FlowNetwork net(3);
  net.AddArc(0, 1, 2, -5);
  net.AddArc(1, 2, 2, 1);
  net.AddArc(0, 2, 2, 0);
  EXPECT_EQ(MinCostFlow(net, 0, 2, 3).total_cost, -8);
}

TEST(MinCostFlowTest, InfeasibleFlow) {
  FlowNetwork net(3);
  net.AddArc(0, 1, 2, 1);
  net.AddArc(1, 2, 1, 1);
  try {
    MinCostFlow(net, 0, 2, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleFlow);
  }
}

TEST(MinCostFlowTest, MatchesEnumerationOnRandomNetworks) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> nodes(2, 8);
  std::uniform_int_distribution<int> cap(0, 2);
  std::uniform_int_distribution<int> cost(-3, 9);
  int solved = 0;
  for (int i = 0; i < 400; ++i) {
    const int v = nodes(rng);
    std::uniform_int_distribution<int> node(0, v - 1);
    std::uniform_int_distribution<int> arcs(1, 9);
    FlowNetwork net(v);
    const int a = arcs(rng);
    for (int k = 0; k < a; ++k) {
      int from = node(rng);
      int to = node(rng);
      if (from == to) continue;
      // Only forward arcs so negative costs never form a cycle.
      if (from > to) std::swap(from, to);
      net.AddArc(from, to, cap(rng), cost(rng));
    }
    const int flow = std::uniform_int_distribution<int>(1, 3)(rng);
    std::int64_t expected = 0;
    const bool feasible =
        testing::OracleMinCostFlow(net, 0, v - 1, flow, &expected);
    if (!feasible) {
      EXPECT_THROW(MinCostFlow(net, 0, v - 1, flow), Error);
      continue;
    }
    const FlowSolution got = MinCostFlow(net, 0, v - 1, flow);
    ASSERT_EQ(got.total_cost, expected) << "case " << i;
    // The reported flow is itself feasible and has the reported cost.
    std::vector<std::int64_t> balance(v, 0);
    std::int64_t c = 0;
    for (int k = 0; k < net.num_arcs(); ++k) {
      ASSERT_GE(got.arc_flow[k], 0);
      ASSERT_LE(got.arc_flow[k], net.capacity(k));
      balance[net.from(k)] -= got.arc_flow[k];
      balance[net.to(k)] += got.arc_flow[k];
      c += got.arc_flow[k] * net.cost(k);
    }
    ASSERT_EQ(c, got.total_cost);
    ASSERT_EQ(balance[0], -flow);
    ASSERT_EQ(balance[v - 1], flow);
    ++solved;
  }
  EXPECT_GT(solved, 50);
}

}  // namespace
}  // namespace edgecache
