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

// Command-line driver: runs scenarios, lists presets, exports traces.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgecache/demand.h"
#include "edgecache/error.h"
#include "edgecache/policies.h"
#include "edgecache/scenario.h"
#include "edgecache/simulation.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolverCap = 3;

int ExitCodeFor(edgecache::ErrorCode code) {
  switch (code) {
    case edgecache::ErrorCode::kInstanceTooLarge:
      return kExitSolverCap;
    case edgecache::ErrorCode::kValidationError:
    case edgecache::ErrorCode::kParseError:
    case edgecache::ErrorCode::kInvalidParameter:
    case edgecache::ErrorCode::kIoError:
      return kExitValidation;
    default:
      return 1;
  }
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunArgs {
  std::string scenario;
  std::string policies;
  int reps = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string out;
  std::string json;
  std::string solver;
  int threads = 0;
};

int Run(const RunArgs& args) {
  edgecache::ScenarioSpec spec = edgecache::LoadScenario(args.scenario);
  if (args.reps > 0) spec.replications = args.reps;
  if (args.has_seed) spec.seed = args.seed;
  if (!args.solver.empty()) {
    spec.solver_mode = edgecache::ParseSolverMode(args.solver);
  }
  if (!args.policies.empty()) spec.policies = SplitList(args.policies);
  edgecache::ValidateScenario(spec);
  const std::vector<edgecache::PolicySpec> policies =
      edgecache::MakePolicySpecs(spec, spec.policies);

  edgecache::ExperimentOptions options;
  options.threads = args.threads;
  const edgecache::SimulationReport report =
      edgecache::RunExperiment(spec, policies, options);

  if (args.out.empty() || args.out == "-") {
    edgecache::WriteReportCsv(report, std::cout);
  } else {
    std::ofstream out(args.out);
    edgecache::Require(static_cast<bool>(out), edgecache::ErrorCode::kIoError,
                       "cannot write " + args.out);
    edgecache::WriteReportCsv(report, out);
  }
  if (!args.json.empty()) {
    std::ofstream out(args.json);
    edgecache::Require(static_cast<bool>(out), edgecache::ErrorCode::kIoError,
                       "cannot write " + args.json);
    edgecache::WriteReportJson(report, out);
  }
  if (!report.lb_exact) {
    std::cerr << "note: the lower bound used a heuristic placement on some "
                 "stages\n";
  }
  return 0;
}

int List() {
  for (const std::string& name : edgecache::PresetNames()) {
    const edgecache::ScenarioSpec s = edgecache::PresetScenario(name);
    std::cout << name << "  " << s.rows << "x" << s.cols
              << "  N0=" << s.initial_contents << "  b=" << s.capacity
              << "  arrivals=" << s.arrivals_per_stage
              << "  ratio=" << s.capacity_ratio()
              << "  solver=" << edgecache::SolverModeName(s.solver_mode)
              << "\n";
  }
  return 0;
}

int Trace(const std::string& scenario, std::uint64_t seed, int replication,
          const std::string& out_path) {
  const edgecache::ScenarioSpec spec = edgecache::LoadScenario(scenario);
  const edgecache::DemandTrace trace = edgecache::GenerateTrace(
      edgecache::MakeArModel(spec), edgecache::MakeTraceConfig(spec),
      edgecache::ReplicationSeed(seed, replication));
  if (out_path.empty() || out_path == "-") {
    edgecache::WriteTraceCsv(trace, std::cout);
  } else {
    std::ofstream out(out_path);
    edgecache::Require(static_cast<bool>(out), edgecache::ErrorCode::kIoError,
                       "cannot write " + out_path);
    edgecache::WriteTraceCsv(trace, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online collaborative edge caching simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("--scenario", run_args.scenario, "Preset name or JSON path")
      ->required();
  run->add_option("--policies", run_args.policies,
                  "Comma list: rh<G>, myopic, onestep, lru-s, lru-m, lb, "
                  "offline, greedy<G>");
  run->add_option("--reps", run_args.reps, "Replications")
      ->check(CLI::PositiveNumber);
  CLI::Option* seed_opt =
      run->add_option("--seed", run_args.seed, "Base random seed");
  run->add_option("--out", run_args.out, "CSV output path ('-' for stdout)");
  run->add_option("--json", run_args.json, "JSON output path");
  run->add_option("--solver", run_args.solver, "exact, flow or greedy")
      ->check(CLI::IsMember({"exact", "flow", "single_copy_flow", "greedy"}));
  run->add_option("--threads", run_args.threads, "Worker threads (0 = auto)");

  app.add_subcommand("list", "List built-in scenarios");

  std::string trace_scenario;
  std::uint64_t trace_seed = 42;
  int trace_rep = 0;
  std::string trace_out;
  CLI::App* trace = app.add_subcommand("trace", "Export one demand trace");
  trace->add_option("--scenario", trace_scenario, "Preset name or JSON path")
      ->required();
  trace->add_option("--seed", trace_seed, "Base random seed");
  trace->add_option("--replication", trace_rep,
                    "Replication index whose trace is written");
  trace->add_option("--out", trace_out, "CSV output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (run->parsed()) {
      run_args.has_seed = seed_opt->count() > 0;
      return Run(run_args);
    }
    if (trace->parsed()) {
      return Trace(trace_scenario, trace_seed, trace_rep, trace_out);
    }
    return List();
  } catch (const edgecache::Error& e) {
    std::cerr << "error (" << edgecache::ErrorCodeName(e.code())
              << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
}
