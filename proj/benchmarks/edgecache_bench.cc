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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "edgecache/cache.h"
#include "edgecache/demand.h"
#include "edgecache/policies.h"
#include "edgecache/scenario.h"
#include "edgecache/solvers.h"
#include "edgecache/topology.h"

namespace edgecache {
namespace {

struct StageFixture {
  PolicyEnvironment env;
  DemandTrace trace;
  CacheState state;
  std::vector<std::int64_t> weights;
};

// Stage-2 decision input of a preset: Offline-style placement at stage 1,
// realized stage-2 demand as weights.
StageFixture MakeFixture(const char* preset) {
  const ScenarioSpec spec = PresetScenario(preset);
  StageFixture f;
  f.env = MakeEnvironment(spec);
  f.trace = GenerateTrace(f.env.model, MakeTraceConfig(spec), 42);
  const auto first = f.trace.lambda[0];
  f.state = GreedyStaticPlacement(
      CacheState(f.trace.num_contents(1), f.env.capacities),
      {first.begin(), first.end()}, f.env.costs, true);
  f.state.AddContents(f.trace.num_contents(2) - f.state.num_contents());
  f.weights = f.trace.lambda[1];
  for (auto& w : f.weights) w *= kWeightScale;
  return f;
}

void BM_ServingCost(benchmark::State& state) {
  const StageFixture f = MakeFixture("ins7.4");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ServingCost(f.state, f.weights, f.env.costs));
  }
}
BENCHMARK(BM_ServingCost);

void BM_SingleCopyFlow(benchmark::State& state) {
  const ScenarioSpec spec = PresetScenario("ins3.4");
  const PolicyEnvironment env = MakeEnvironment(spec);
  const DemandTrace trace = GenerateTrace(env.model, MakeTraceConfig(spec), 42);
  const auto now = trace.lambda[0];
  const CacheState shape(trace.num_contents(1), env.capacities);
  StageProblem p;
  p.prev_state =
      SolveStaticPlacement(shape, {now.begin(), now.end()}, env.costs, false)
          .state;
  p.prev_state.AddContents(trace.num_contents(2) - p.prev_state.num_contents());
  p.weights = trace.lambda[1];
  p.costs = env.costs;
  p.gamma = env.gamma;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveSingleCopyUpdate(p));
  }
}
BENCHMARK(BM_SingleCopyFlow)->Unit(benchmark::kMillisecond);

void BM_ExactUpdateIns1(benchmark::State& state) {
  const StageFixture f = MakeFixture("ins1.4");
  StageProblem p;
  p.prev_state = f.state;
  p.weights = f.weights;
  p.weight_scale = kWeightScale;
  p.costs = f.env.costs;
  p.gamma = f.env.gamma;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveExactUpdate(p, true));
  }
}
BENCHMARK(BM_ExactUpdateIns1)->Unit(benchmark::kMicrosecond);

void BM_GreedyReplaceIns7(benchmark::State& state) {
  const StageFixture f = MakeFixture("ins7.4");
  int total = 0;
  for (std::int64_t b : f.env.capacities) total += static_cast<int>(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreedyReplace(f.state, f.weights, f.env.costs,
                                           f.env.gamma * kWeightScale, total));
  }
}
BENCHMARK(BM_GreedyReplaceIns7)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace edgecache

BENCHMARK_MAIN();
