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

#include "edgecache/simulation.h"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>
#include <utility>

#include "edgecache/cache.h"
#include "edgecache/error.h"

namespace edgecache {

std::uint64_t ReplicationSeed(std::uint64_t seed, int replication) {
  // splitmix64 over the base seed and the replication index
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL *
                               (static_cast<std::uint64_t>(replication) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double ProportionalCost(double cost, double x0, double lb) {
  if (x0 > lb) return (cost - lb) / (x0 - lb);
  if (cost <= lb) return 0.0;
  return std::numeric_limits<double>::infinity();
}

double CacheHitRatio(std::span<const StageRecord> stages, bool local) {
  std::int64_t requests = 0;
  std::int64_t hits = 0;
  for (const StageRecord& s : stages) {
    requests += s.requests;
    hits += local ? s.local_hits : s.hits;
  }
  if (requests == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hits) / static_cast<double>(requests);
}

namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

PolicyRun RunPolicy(const PolicySpec& spec, const PolicyEnvironment& env,
                    const GridTopology& topo, const DemandTrace& trace) {
  PolicyRun run;
  run.spec = spec;
  std::unique_ptr<Policy> policy = MakePolicy(spec, &env);
  const int horizon = trace.num_stages();
  CacheState state(trace.num_contents(1), env.capacities);
  int t = 1;
  try {
    for (t = 1; t <= horizon; ++t) {
      const DemandView view(trace, t);
      StageRecord record;
      const auto start = Clock::now();
      if (t == 1) {
        state = policy->Place(view, state);
      } else {
        state.AddContents(trace.num_contents(t) - state.num_contents());
        const CacheAction action = policy->Update(view, state);
        Require(IsFeasible(state, action), ErrorCode::kInfeasibleAction,
                "policy returned an infeasible action");
        state = ApplyAction(state, action);
        record.changes = action.num_changes();
        if (policy->charges_updates()) {
          record.penalty = UpdatePenalty(action, env.gamma);
        }
      }
      record.decision_ms = MillisSince(start);
      Require(state.fits(), ErrorCode::kInfeasibleAction,
              "policy state exceeds a capacity");

      const auto demand = trace.lambda[t - 1];
      record.serving = ServingCost(state, demand, env.costs);
      const int users = topo.num_users();
      for (int n = 0; n < state.num_contents(); ++n) {
        const std::int64_t w = demand[n];
        if (w == 0) continue;
        record.requests += w * users;
        if (state.copies(n) > 0) record.hits += w * users;
        for (int u = 0; u < users; ++u) {
          if (state.cached(n, topo.home(u))) record.local_hits += w;
        }
      }
      run.total_cost += record.serving + record.penalty;
      run.updates += record.changes;
      run.wall_ms += record.decision_ms;
      run.max_stage_ms = std::max(run.max_stage_ms, record.decision_ms);
      run.stages.push_back(record);
    }
  } catch (const Error& e) {
    throw Error(e.code(), "policy " + spec.label + ", stage " +
                              std::to_string(t) + ": " + e.what());
  }
  run.exact = policy->exact();
  run.deltas = policy->executed_deltas();
  return run;
}

}  // namespace

ReplicationResult RunOnTrace(const ScenarioSpec& spec,
                             const PolicyEnvironment& env,
                             const DemandTrace& trace,
                             std::span<const PolicySpec> policies) {
  const GridTopology topo = MakeTopology(spec);
  ReplicationResult result;
  result.seed = trace.rng_seed;
  int offline = -1;
  int lb = -1;
  for (const PolicySpec& p : policies) {
    result.runs.push_back(RunPolicy(p, env, topo, trace));
    const int index = static_cast<int>(result.runs.size()) - 1;
    if (p.kind == PolicyKind::kOffline && offline < 0) offline = index;
    if (p.kind == PolicyKind::kClairvoyantLB && lb < 0) lb = index;
  }
  if (offline >= 0) {
    result.x0 = result.runs[offline].total_cost;
  } else {
    PolicySpec p;
    p.kind = PolicyKind::kOffline;
    p.label = "offline";
    result.x0 = RunPolicy(p, env, topo, trace).total_cost;
  }
  if (lb >= 0) {
    result.lb = result.runs[lb].total_cost;
    result.lb_exact = result.runs[lb].exact;
  } else {
    PolicySpec p;
    p.kind = PolicyKind::kClairvoyantLB;
    p.label = "lb";
    const PolicyRun run = RunPolicy(p, env, topo, trace);
    result.lb = run.total_cost;
    result.lb_exact = run.exact;
  }
  return result;
}

ReplicationResult RunReplication(const ScenarioSpec& spec,
                                 std::span<const PolicySpec> policies,
                                 std::uint64_t seed) {
  const PolicyEnvironment env = MakeEnvironment(spec);
  const DemandTrace trace =
      GenerateTrace(env.model, MakeTraceConfig(spec), seed);
  return RunOnTrace(spec, env, trace, policies);
}

SimulationReport RunExperiment(const ScenarioSpec& spec,
                               std::span<const PolicySpec> policies,
                               const ExperimentOptions& options) {
  ValidateScenario(spec);
  const PolicyEnvironment env = MakeEnvironment(spec);
  const TraceConfig config = MakeTraceConfig(spec);
  const int reps = spec.replications;
  std::vector<ReplicationResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, reps));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int rep = next++; rep < reps; rep = next++) {
      try {
        const DemandTrace trace =
            GenerateTrace(env.model, config, ReplicationSeed(spec.seed, rep));
        results[rep] = RunOnTrace(spec, env, trace, policies);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimulationReport report;
  report.scenario = spec.name;
  report.replications = reps;
  report.seed = spec.seed;
  for (const ReplicationResult& r : results) {
    report.mean_x0 += static_cast<double>(r.x0) / reps;
    report.mean_lb += static_cast<double>(r.lb) / reps;
    report.lb_exact = report.lb_exact && r.lb_exact;
  }
  for (size_t p = 0; p < policies.size(); ++p) {
    PolicySummary s;
    s.spec = policies[p];
    s.mean_stage_cost.assign(spec.num_stages, 0.0);
    std::vector<StageRecord> all;
    double sum_sq = 0.0;
    for (const ReplicationResult& r : results) {
      const PolicyRun& run = r.runs[p];
      const double cost = static_cast<double>(run.total_cost);
      s.mean_cost += cost / reps;
      sum_sq += cost * cost;
      s.mean_updates += static_cast<double>(run.updates) / reps;
      s.wall_ms += run.wall_ms / reps;
      s.max_stage_ms = std::max(s.max_stage_ms, run.max_stage_ms);
      s.exact = s.exact && run.exact;
      for (size_t t = 0; t < run.stages.size(); ++t) {
        s.mean_stage_cost[t] +=
            static_cast<double>(run.stages[t].serving + run.stages[t].penalty) /
            reps;
      }
      all.insert(all.end(), run.stages.begin(), run.stages.end());
      s.replacements += static_cast<std::int64_t>(run.deltas.size());
      for (Cost d : run.deltas) {
        if (d >= 0) ++s.delta_violations;
      }
    }
    if (reps > 1) {
      const double var = std::max(
          0.0, (sum_sq - reps * s.mean_cost * s.mean_cost) / (reps - 1));
      s.stderr_cost = std::sqrt(var / reps);
    }
    s.proportional_cost =
        ProportionalCost(s.mean_cost, report.mean_x0, report.mean_lb);
    s.proportional_degenerate = !(report.mean_x0 > report.mean_lb);
    s.hit_ratio = CacheHitRatio(all);
    s.local_hit_ratio = CacheHitRatio(all, true);
    report.policies.push_back(std::move(s));
  }
  if (options.keep_runs) report.runs = std::move(results);
  return report;
}

namespace {

std::string Number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

nlohmann::json JsonNumber(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

void WriteReportCsv(const SimulationReport& report, std::ostream& out) {
  out << "scenario,policy,solver_mode,mean_cost,stderr_cost,"
         "proportional_cost,hit_ratio,mean_updates,wall_ms,local_hit_ratio\n";
  for (const PolicySummary& s : report.policies) {
    out << report.scenario << ',' << s.spec.label << ','
        << s.spec.effective_solver() << ',' << Number(s.mean_cost) << ','
        << Number(s.stderr_cost) << ',' << Number(s.proportional_cost) << ','
        << Number(s.hit_ratio) << ',' << Number(s.mean_updates) << ','
        << Number(s.wall_ms) << ',' << Number(s.local_hit_ratio) << '\n';
  }
}

void WriteReportJson(const SimulationReport& report, std::ostream& out) {
  nlohmann::json doc;
  doc["scenario"] = report.scenario;
  doc["replications"] = report.replications;
  doc["seed"] = report.seed;
  doc["mean_x0"] = report.mean_x0;
  doc["mean_lb"] = report.mean_lb;
  doc["lb_exact"] = report.lb_exact;
  nlohmann::json rows = nlohmann::json::array();
  for (const PolicySummary& s : report.policies) {
    nlohmann::json row;
    row["policy"] = s.spec.label;
    row["kind"] = std::string(PolicyKindName(s.spec.kind));
    row["solver_mode"] = std::string(s.spec.effective_solver());
    row["exact"] = s.exact;
    row["mean_cost"] = s.mean_cost;
    row["stderr_cost"] = s.stderr_cost;
    row["proportional_cost"] = JsonNumber(s.proportional_cost);
    row["proportional_degenerate"] = s.proportional_degenerate;
    row["hit_ratio"] = JsonNumber(s.hit_ratio);
    row["local_hit_ratio"] = JsonNumber(s.local_hit_ratio);
    row["mean_updates"] = s.mean_updates;
    row["wall_ms"] = s.wall_ms;
    row["max_stage_ms"] = s.max_stage_ms;
    row["replacements"] = s.replacements;
    row["delta_violations"] = s.delta_violations;
    row["mean_stage_cost"] = s.mean_stage_cost;
    rows.push_back(std::move(row));
  }
  doc["policies"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace edgecache
