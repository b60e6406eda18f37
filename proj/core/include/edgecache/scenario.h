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

#ifndef EDGECACHE_SCENARIO_H_
#define EDGECACHE_SCENARIO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edgecache/demand.h"
#include "edgecache/policies.h"
#include "edgecache/topology.h"

namespace edgecache {

struct ScenarioSpec {
  std::string name;
  int rows = 1;
  int cols = 3;
  Cost hop_cost = 2;
  Cost mcbs_cost = 20;
  int initial_contents = 10;
  int arrivals_per_stage = 1;
  std::int64_t capacity = 1;
  Cost gamma = 100;
  int num_stages = 24;

  std::vector<double> beta = {0.6, 0.3, 0.1};
  double noise_sigma = 2.0;
  double zipf_skew = 0.8;
  // "flat", "diurnal" or "custom" (then mu_values holds one value per stage).
  std::string mu_kind = "diurnal";
  std::vector<double> mu_values;
  // Mean per-content requests per stage before the horizon.
  double base_demand = 10.0;

  int replications = 100;
  std::uint64_t seed = 42;
  SolverMode solver_mode = SolverMode::kExact;
  std::int64_t node_budget = 5'000'000;
  // Policy tokens as accepted by ParsePolicy.
  std::vector<std::string> policies = {"rh1",    "rh2",     "rh3",
                                       "myopic", "onestep", "lru-s",
                                       "lru-m",  "lb",      "offline"};
  int policy_r = -1;
  double lru_decay = 0.5;

  int num_scbs() const { return rows * cols; }
  // Total cache capacity over the initial catalog size.
  double capacity_ratio() const;
};

// Every violated invariant, one message each; empty when valid.
std::vector<std::string> ScenarioProblems(const ScenarioSpec& spec);
// Throws kValidationError listing all problems.
void ValidateScenario(const ScenarioSpec& spec);

std::vector<std::string> PresetNames();
bool IsPreset(std::string_view name);
ScenarioSpec PresetScenario(std::string_view name);

// JSON document with nested objects or dotted keys. Without a "preset" key
// the keys name, topology.rows, topology.cols, contents.initial,
// contents.arrivals_per_stage, capacity, gamma and stages are required.
ScenarioSpec ParseScenarioJson(std::string_view text,
                               std::string_view source = "<string>");
// A preset name or a path to a JSON file.
ScenarioSpec LoadScenario(std::string_view name_or_path);

ArModel MakeArModel(const ScenarioSpec& spec);
GridTopology MakeTopology(const ScenarioSpec& spec);
PolicyEnvironment MakeEnvironment(const ScenarioSpec& spec);
TraceConfig MakeTraceConfig(const ScenarioSpec& spec);
std::vector<PolicySpec> MakePolicySpecs(const ScenarioSpec& spec,
                                        const std::vector<std::string>& tokens);

}  // namespace edgecache

#endif  // EDGECACHE_SCENARIO_H_
