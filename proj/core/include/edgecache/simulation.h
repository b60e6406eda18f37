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

#ifndef EDGECACHE_SIMULATION_H_
#define EDGECACHE_SIMULATION_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "edgecache/demand.h"
#include "edgecache/policies.h"
#include "edgecache/scenario.h"

namespace edgecache {

struct StageRecord {
  Cost serving = 0;
  Cost penalty = 0;
  int changes = 0;
  // Requests summed over users, those served by any SCBS, and those served
  // by the requesting user's home SCBS.
  std::int64_t requests = 0;
  std::int64_t hits = 0;
  std::int64_t local_hits = 0;
  double decision_ms = 0.0;
};

struct PolicyRun {
  PolicySpec spec;
  std::vector<StageRecord> stages;  // index t - 1
  Cost total_cost = 0;
  int updates = 0;
  bool exact = true;
  std::vector<Cost> deltas;
  double wall_ms = 0.0;
  double max_stage_ms = 0.0;
};

struct ReplicationResult {
  std::uint64_t seed = 0;
  std::vector<PolicyRun> runs;
  // Offline placement held all horizon, and the clairvoyant bound.
  Cost x0 = 0;
  Cost lb = 0;
  bool lb_exact = true;
};

std::uint64_t ReplicationSeed(std::uint64_t seed, int replication);

// Runs the policies on one trace. Offline and the lower bound are always
// evaluated for x0 and LB.
ReplicationResult RunOnTrace(const ScenarioSpec& spec,
                             const PolicyEnvironment& env,
                             const DemandTrace& trace,
                             std::span<const PolicySpec> policies);

ReplicationResult RunReplication(const ScenarioSpec& spec,
                                 std::span<const PolicySpec> policies,
                                 std::uint64_t seed);

// (cost - lb) / (x0 - lb); 0 when x0 == lb == cost, +infinity when
// x0 == lb < cost.
double ProportionalCost(double cost, double x0, double lb);

// Fraction of requests served by an SCBS; NaN when there were none.
double CacheHitRatio(std::span<const StageRecord> stages, bool local = false);

struct PolicySummary {
  PolicySpec spec;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  double proportional_cost = 0.0;
  bool proportional_degenerate = false;
  double hit_ratio = 0.0;
  double local_hit_ratio = 0.0;
  double mean_updates = 0.0;
  double wall_ms = 0.0;
  double max_stage_ms = 0.0;
  bool exact = true;
  std::vector<double> mean_stage_cost;
  std::int64_t replacements = 0;
  std::int64_t delta_violations = 0;
};

struct SimulationReport {
  std::string scenario;
  int replications = 0;
  std::uint64_t seed = 0;
  double mean_x0 = 0.0;
  double mean_lb = 0.0;
  bool lb_exact = true;
  std::vector<PolicySummary> policies;
  // Kept only when requested.
  std::vector<ReplicationResult> runs;
};

struct ExperimentOptions {
  // 0 uses the hardware concurrency.
  int threads = 0;
  bool keep_runs = false;
};

SimulationReport RunExperiment(const ScenarioSpec& spec,
                               std::span<const PolicySpec> policies,
                               const ExperimentOptions& options = {});

// Columns: scenario, policy, solver_mode, mean_cost, stderr_cost,
// proportional_cost, hit_ratio, mean_updates, wall_ms, local_hit_ratio.
void WriteReportCsv(const SimulationReport& report, std::ostream& out);
void WriteReportJson(const SimulationReport& report, std::ostream& out);

}  // namespace edgecache

#endif  // EDGECACHE_SIMULATION_H_
