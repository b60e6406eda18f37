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

#ifndef EDGECACHE_POLICIES_H_
#define EDGECACHE_POLICIES_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgecache/cache.h"
#include "edgecache/demand.h"
#include "edgecache/solvers.h"
#include "edgecache/topology.h"

namespace edgecache {

enum class PolicyKind {
  kOffline,
  kLruSingle,
  kLruMulti,
  kMyopic,
  kOneStep,
  kRollingHorizon,
  kGreedyReplace,
  kClairvoyantLB,
};

enum class SolverMode { kExact, kSingleCopyFlow, kGreedy };

std::string_view PolicyKindName(PolicyKind kind);
std::string_view SolverModeName(SolverMode mode);
// Accepts "exact", "flow" / "single_copy_flow" and "greedy".
SolverMode ParseSolverMode(std::string_view text);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kMyopic;
  // Replacements per stage; negative selects the default (cache size per
  // SCBS for LRU, total capacity for the greedy heuristic).
  int r = -1;
  // Forecast horizon for rolling-horizon weights.
  int horizon = 0;
  SolverMode solver_mode = SolverMode::kExact;
  // Recency score decay for LRU; 1.0 turns the score into a frequency.
  double lru_decay = 0.5;
  std::string label;

  // The solver mode that is actually used: LRU, Offline and the lower bound
  // ignore the configured one.
  std::string_view effective_solver() const;
};

// Short names used by the CLI: offline, lru-s, lru-m, myopic, onestep,
// rh<G>, greedy<G>, lb. A bare "greedy" means greedy1.
PolicySpec ParsePolicy(std::string_view token, SolverMode solver_mode);

struct PolicyEnvironment {
  CostMatrix costs;
  std::vector<std::int64_t> capacities;
  Cost gamma = 0;
  ArModel model;
  ExactOptions exact;
};

// Read access to a demand trace up to and including stage t.
class DemandView {
 public:
  DemandView(const DemandTrace& trace, int t);

  int stage() const { return t_; }
  int num_stages() const { return trace_.num_stages(); }
  // Contents born by stage t.
  int num_contents() const { return trace_.num_contents(t_); }
  // Requests at stage s <= t; zero for contents not yet born.
  std::int64_t count(int s, int n) const;
  std::span<const std::int64_t> current() const {
    return trace_.lambda[t_ - 1];
  }
  std::int64_t current_total() const { return trace_.total(t_); }
  const Content& content(int n) const { return trace_.catalog.contents[n]; }
  // Demand for stages t, t-1, ..., most recent first.
  std::vector<double> History(int n, int depth) const;

 private:
  const DemandTrace& trace_;
  int t_;
};

// Zipf popularity by rank of the most recent pre-horizon value, scaled by
// the total of those values.
std::vector<double> OfflineWeights(const DemandView& view, double skew);

// Observed demand plus the next `horizon` forecasts, cut at the last stage.
std::vector<double> RollingHorizonWeights(const ArModel& model,
                                          const DemandView& view, int horizon);

// Observed demand plus the remaining stages of a rescaled Zipf profile
// ranked by average demand since birth.
std::vector<double> OneStepWeights(const DemandView& view, double skew);

struct GreedyReplaceResult {
  CacheAction action;
  // Score change of every executed replacement, in the units of the
  // weights times costs.
  std::vector<Cost> deltas;
};

// Content-by-content replacement: round i tries the i-th most demanded
// content at every SCBS against the cheapest eviction there, or a free slot.
GreedyReplaceResult GreedyReplace(const CacheState& state,
                                  std::span<const std::int64_t> weights,
                                  const CostMatrix& costs, Cost gamma, int r);

// Replaces the lowest-scored cached contents of each SCBS by the most
// requested uncached ones while the incoming demand is strictly larger.
CacheAction LruUpdate(const CacheState& state,
                      std::span<const std::int64_t> observed,
                      std::span<const double> scores,
                      std::span<const int> replacements, bool single_copy);

class Policy {
 public:
  Policy(PolicySpec spec, const PolicyEnvironment* env)
      : spec_(std::move(spec)), env_(env) {}
  virtual ~Policy() = default;

  const PolicySpec& spec() const { return spec_; }
  // Free placement at stage 1, starting from the empty `shape`.
  virtual CacheState Place(const DemandView& view, const CacheState& shape) = 0;
  // Charged update at stages 2..T; `state` already covers the stage catalog.
  virtual CacheAction Update(const DemandView& view,
                             const CacheState& state) = 0;
  // False when updates are free (the clairvoyant bound).
  virtual bool charges_updates() const { return true; }

  // Whether every decision so far came from a solver proven optimal.
  bool exact() const { return exact_; }
  const std::vector<Cost>& executed_deltas() const { return deltas_; }

 protected:
  const PolicyEnvironment& env() const { return *env_; }
  CacheState PlaceWithSolver(const CacheState& shape,
                             std::span<const double> weights);
  CacheAction UpdateWithSolver(const CacheState& state,
                               std::span<const double> weights);
  int TotalReplacements() const;

  bool exact_ = true;
  std::vector<Cost> deltas_;

 private:
  PolicySpec spec_;
  const PolicyEnvironment* env_;
};

// `env` must outlive the policy.
std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec,
                                   const PolicyEnvironment* env);

}  // namespace edgecache

#endif  // EDGECACHE_POLICIES_H_
