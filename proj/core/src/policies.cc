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

#include "edgecache/policies.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>

#include "edgecache/error.h"

namespace edgecache {

std::string_view PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOffline:
      return "Offline";
    case PolicyKind::kLruSingle:
      return "LruSingle";
    case PolicyKind::kLruMulti:
      return "LruMulti";
    case PolicyKind::kMyopic:
      return "Myopic";
    case PolicyKind::kOneStep:
      return "OneStep";
    case PolicyKind::kRollingHorizon:
      return "RollingHorizon";
    case PolicyKind::kGreedyReplace:
      return "GreedyReplace";
    case PolicyKind::kClairvoyantLB:
      return "ClairvoyantLB";
  }
  return "?";
}

std::string_view SolverModeName(SolverMode mode) {
  switch (mode) {
    case SolverMode::kExact:
      return "exact";
    case SolverMode::kSingleCopyFlow:
      return "single_copy_flow";
    case SolverMode::kGreedy:
      return "greedy";
  }
  return "?";
}

SolverMode ParseSolverMode(std::string_view text) {
  if (text == "exact") return SolverMode::kExact;
  if (text == "flow" || text == "single_copy_flow") {
    return SolverMode::kSingleCopyFlow;
  }
  if (text == "greedy") return SolverMode::kGreedy;
  throw Error(ErrorCode::kValidationError,
              "unknown solver mode '" + std::string(text) +
                  "' (expected exact, flow or greedy)");
}

std::string_view PolicySpec::effective_solver() const {
  switch (kind) {
    case PolicyKind::kOffline:
    case PolicyKind::kClairvoyantLB:
      return "static";
    case PolicyKind::kLruSingle:
    case PolicyKind::kLruMulti:
      return "lru";
    case PolicyKind::kGreedyReplace:
      return "greedy";
    default:
      return SolverModeName(solver_mode);
  }
}

namespace {

int ParseSuffix(std::string_view token, std::string_view prefix, int fallback) {
  const std::string_view digits = token.substr(prefix.size());
  if (digits.empty()) return fallback;
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  Require(
      ec == std::errc() && ptr == digits.data() + digits.size() && value >= 0,
      ErrorCode::kValidationError,
      "bad policy name '" + std::string(token) + "'");
  return value;
}

}  // namespace

PolicySpec ParsePolicy(std::string_view token, SolverMode solver_mode) {
  PolicySpec spec;
  spec.label = std::string(token);
  spec.solver_mode = solver_mode;
  if (token == "offline") {
    spec.kind = PolicyKind::kOffline;
  } else if (token == "lru-s") {
    spec.kind = PolicyKind::kLruSingle;
  } else if (token == "lru-m") {
    spec.kind = PolicyKind::kLruMulti;
  } else if (token == "myopic") {
    spec.kind = PolicyKind::kMyopic;
  } else if (token == "onestep") {
    spec.kind = PolicyKind::kOneStep;
  } else if (token == "lb") {
    spec.kind = PolicyKind::kClairvoyantLB;
  } else if (token.starts_with("rh")) {
    spec.kind = PolicyKind::kRollingHorizon;
    spec.horizon = ParseSuffix(token, "rh", -1);
    Require(spec.horizon >= 0, ErrorCode::kValidationError,
            "rolling horizon needs a length, e.g. rh2");
  } else if (token.starts_with("greedy")) {
    spec.kind = PolicyKind::kGreedyReplace;
    spec.horizon = ParseSuffix(token, "greedy", 1);
    spec.solver_mode = SolverMode::kGreedy;
  } else {
    throw Error(ErrorCode::kValidationError,
                "unknown policy '" + std::string(token) + "'");
  }
  return spec;
}

DemandView::DemandView(const DemandTrace& trace, int t) : trace_(trace), t_(t) {
  Require(t >= 1 && t <= trace.num_stages(), ErrorCode::kIndexOutOfRange,
          "stage out of range");
}

std::int64_t DemandView::count(int s, int n) const {
  Require(s >= 1 && s <= t_, ErrorCode::kIndexOutOfRange,
          "demand after the current stage is not observable");
  return trace_.count(s, n);
}

std::vector<double> DemandView::History(int n, int depth) const {
  return HistoryWindow(trace_, n, t_, depth);
}

namespace {

// Positions sorted by value descending, index ascending.
std::vector<int> RankOrder(std::span<const double> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return order;
}

std::vector<double> ZipfByRank(std::span<const double> values, double skew,
                               double scale) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const std::vector<double> p =
      ZipfPopularity(static_cast<int>(values.size()), skew);
  const std::vector<int> order = RankOrder(values);
  for (size_t r = 0; r < order.size(); ++r) out[order[r]] = p[r] * scale;
  return out;
}

std::vector<std::int64_t> ScaleWeights(std::span<const double> weights) {
  std::vector<std::int64_t> out;
  out.reserve(weights.size());
  for (double w : weights) {
    Require(std::isfinite(w) && w >= 0.0, ErrorCode::kInvalidParameter,
            "weights must be finite and nonnegative");
    out.push_back(std::llround(w * kWeightScale));
  }
  return out;
}

}  // namespace

std::vector<double> OfflineWeights(const DemandView& view, double skew) {
  const int n_count = view.num_contents();
  std::vector<double> last(n_count, 0.0);
  double total = 0.0;
  for (int n = 0; n < n_count; ++n) {
    const auto& seed = view.content(n).seed_history;
    last[n] = seed.empty() ? 0.0 : seed.front();
    total += last[n];
  }
  return ZipfByRank(last, skew, total);
}

std::vector<double> RollingHorizonWeights(const ArModel& model,
                                          const DemandView& view, int horizon) {
  Require(horizon >= 0, ErrorCode::kInvalidParameter, "horizon must be >= 0");
  const int t = view.stage();
  const int steps = std::min(horizon, view.num_stages() - t);
  const int n_count = view.num_contents();
  std::vector<double> w(n_count);
  for (int n = 0; n < n_count; ++n) {
    w[n] = static_cast<double>(view.count(t, n));
    if (steps <= 0) continue;
    const std::vector<double> history = view.History(n, model.history_depth());
    for (int tau = 1; tau <= steps; ++tau) {
      w[n] += Forecast(model, history, t, tau);
    }
  }
  return w;
}

std::vector<double> OneStepWeights(const DemandView& view, double skew) {
  const int t = view.stage();
  const int n_count = view.num_contents();
  std::vector<double> average(n_count, 0.0);
  for (int n = 0; n < n_count; ++n) {
    const int birth = std::max(1, view.content(n).birth_stage);
    double sum = 0.0;
    for (int s = birth; s <= t; ++s)
      sum += static_cast<double>(view.count(s, n));
    average[n] = sum / (t - birth + 1);
  }
  const double future_total = static_cast<double>(view.num_stages() - t) *
                              static_cast<double>(view.current_total());
  std::vector<double> w = ZipfByRank(average, skew, future_total);
  for (int n = 0; n < n_count; ++n) {
    w[n] += static_cast<double>(view.count(t, n));
  }
  return w;
}

namespace {

// Per-request delivery cost of a content held at the SCBSs in `mask`.
Cost DeliveryCost(const CostMatrix& costs, std::uint64_t mask) {
  Cost total = 0;
  for (int u = 0; u < costs.num_users(); ++u) {
    Cost best = costs.mcbs(u);
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      best = std::min(best, costs.scbs(std::countr_zero(bits), u));
    }
    total += best;
  }
  return total;
}

}  // namespace

GreedyReplaceResult GreedyReplace(const CacheState& state,
                                  std::span<const std::int64_t> weights,
                                  const CostMatrix& costs, Cost gamma, int r) {
  const int n_count = state.num_contents();
  const int m_count = state.num_scbs();
  Require(static_cast<int>(weights.size()) == n_count,
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Require(m_count <= 64, ErrorCode::kInstanceTooLarge,
          "greedy replacement supports at most 64 SCBSs");
  Require(r >= 0 && gamma >= 0, ErrorCode::kInvalidParameter,
          "r and gamma must be >= 0");

  CacheState next = state;
  std::vector<std::uint64_t> mask(n_count);
  std::vector<Cost> delivery(n_count);
  std::vector<std::vector<int>> held(m_count);
  for (int n = 0; n < n_count; ++n) {
    mask[n] = state.copy_mask(n);
    delivery[n] = DeliveryCost(costs, mask[n]);
    for (std::uint64_t bits = mask[n]; bits != 0; bits &= bits - 1) {
      held[std::countr_zero(bits)].push_back(n);
    }
  }
  auto evict_delta = [&](int j, int k) {
    const std::uint64_t without = mask[j] & ~(std::uint64_t{1} << k);
    return gamma + weights[j] * (DeliveryCost(costs, without) - delivery[j]);
  };
  // Cheapest eviction per SCBS, refreshed when a copy set changes.
  std::vector<std::pair<Cost, int>> cheapest(m_count);
  std::vector<bool> stale(m_count, true);
  const bool unit = state.unit_sizes();
  auto refresh = [&](int k) {
    std::pair<Cost, int> best{0, -1};
    for (int j : held[k]) {
      const std::pair<Cost, int> cand{evict_delta(j, k), j};
      if (best.second < 0 || cand < best) best = cand;
    }
    cheapest[k] = best;
    stale[k] = false;
  };

  std::vector<int> order(n_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });

  GreedyReplaceResult result;
  const int rounds = std::min(r, n_count);
  for (int round = 0; round < rounds; ++round) {
    const int i = order[round];
    bool found = false;
    Cost best_delta = 0;
    int best_k = -1;
    int best_j = -1;
    auto consider = [&](Cost delta, int k, int j) {
      if (!found ||
          std::tie(delta, k, j) < std::tie(best_delta, best_k, best_j)) {
        found = true;
        best_delta = delta;
        best_k = k;
        best_j = j;
      }
    };
    for (int k = 0; k < m_count; ++k) {
      if (mask[i] >> k & 1) continue;
      if (next.size_of(i) > next.capacity(k)) continue;
      const Cost add =
          gamma +
          weights[i] * (DeliveryCost(costs, mask[i] | (std::uint64_t{1} << k)) -
                        delivery[i]);
      if (next.used(k) + next.size_of(i) <= next.capacity(k)) {
        consider(add, k, -1);
      }
      if (unit) {
        if (stale[k]) refresh(k);
        if (cheapest[k].second >= 0) {
          consider(add + cheapest[k].first, k, cheapest[k].second);
        }
      } else {
        for (int j : held[k]) {
          if (next.used(k) - next.size_of(j) + next.size_of(i) >
              next.capacity(k)) {
            continue;
          }
          consider(add + evict_delta(j, k), k, j);
        }
      }
    }
    if (!found || best_delta >= 0) continue;

    auto touch = [&](int content) {
      for (std::uint64_t bits = mask[content]; bits != 0; bits &= bits - 1) {
        stale[std::countr_zero(bits)] = true;
      }
    };
    const int k = best_k;
    touch(i);
    if (best_j >= 0) {
      touch(best_j);
      next.set(best_j, k, false);
      mask[best_j] &= ~(std::uint64_t{1} << k);
      delivery[best_j] = DeliveryCost(costs, mask[best_j]);
      auto& list = held[k];
      list.erase(std::find(list.begin(), list.end(), best_j));
    }
    next.set(i, k, true);
    mask[i] |= std::uint64_t{1} << k;
    delivery[i] = DeliveryCost(costs, mask[i]);
    held[k].push_back(i);
    stale[k] = true;
    touch(i);
    result.deltas.push_back(best_delta);
  }
  result.action = ActionBetween(state, next);
  return result;
}

CacheAction LruUpdate(const CacheState& state,
                      std::span<const std::int64_t> observed,
                      std::span<const double> scores,
                      std::span<const int> replacements, bool single_copy) {
  const int n_count = state.num_contents();
  const int m_count = state.num_scbs();
  Require(static_cast<int>(observed.size()) == n_count &&
              static_cast<int>(scores.size()) == n_count,
          ErrorCode::kInvalidParameter,
          "one observation and one score per content");
  Require(static_cast<int>(replacements.size()) == m_count,
          ErrorCode::kInvalidParameter, "one replacement budget per SCBS");

  CacheState next = state;
  for (int k = 0; k < m_count; ++k) {
    std::vector<int> in;
    std::vector<int> out;
    for (int n = 0; n < n_count; ++n) {
      if (next.cached(n, k)) {
        out.push_back(n);
      } else if (observed[n] > 0 && !(single_copy && next.copies(n) > 0)) {
        in.push_back(n);
      }
    }
    std::stable_sort(in.begin(), in.end(),
                     [&](int a, int b) { return observed[a] > observed[b]; });
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
      return std::tie(scores[a], observed[a]) <
             std::tie(scores[b], observed[b]);
    });
    const size_t steps =
        std::min<size_t>({static_cast<size_t>(std::max(0, replacements[k])),
                          in.size(), out.size()});
    for (size_t s = 0; s < steps; ++s) {
      const int add = in[s];
      const int drop = out[s];
      if (observed[add] <= observed[drop]) break;
      if (next.used(k) - next.size_of(drop) + next.size_of(add) >
          next.capacity(k)) {
        break;
      }
      next.set(drop, k, false);
      next.set(add, k, true);
    }
  }
  return ActionBetween(state, next);
}

CacheState Policy::PlaceWithSolver(const CacheState& shape,
                                   std::span<const double> weights) {
  const std::vector<std::int64_t> w = ScaleWeights(weights);
  switch (spec_.solver_mode) {
    case SolverMode::kExact: {
      PlacementResult p =
          SolveStaticPlacement(shape, w, env_->costs, true, env_->exact);
      exact_ = exact_ && p.exact;
      return std::move(p.state);
    }
    case SolverMode::kSingleCopyFlow: {
      PlacementResult p =
          SolveStaticPlacement(shape, w, env_->costs, false, env_->exact);
      exact_ = exact_ && p.exact;
      return std::move(p.state);
    }
    case SolverMode::kGreedy:
      exact_ = false;
      return GreedyStaticPlacement(shape, w, env_->costs, true);
  }
  return shape;
}

CacheAction Policy::UpdateWithSolver(const CacheState& state,
                                     std::span<const double> weights) {
  switch (spec_.solver_mode) {
    case SolverMode::kExact:
      return SolveExactUpdate(
          MakeStageProblem(state, weights, env_->costs, env_->gamma), true,
          env_->exact);
    case SolverMode::kSingleCopyFlow:
      return SolveSingleCopyUpdate(
          MakeStageProblem(state, weights, env_->costs, env_->gamma));
    case SolverMode::kGreedy: {
      exact_ = false;
      const std::vector<std::int64_t> w = ScaleWeights(weights);
      GreedyReplaceResult g =
          GreedyReplace(state, w, env_->costs, env_->gamma * kWeightScale,
                        spec_.r >= 0 ? spec_.r : TotalReplacements());
      deltas_.insert(deltas_.end(), g.deltas.begin(), g.deltas.end());
      return std::move(g.action);
    }
  }
  return {};
}

int Policy::TotalReplacements() const {
  std::int64_t total = 0;
  for (std::int64_t b : env_->capacities) total += b;
  return static_cast<int>(std::min<std::int64_t>(total, 1 << 30));
}

namespace {

class OfflinePolicy : public Policy {
 public:
  using Policy::Policy;

  CacheState Place(const DemandView& view, const CacheState& shape) override {
    const std::vector<std::int64_t> w =
        ScaleWeights(OfflineWeights(view, env().model.zipf_skew));
    PlacementResult p =
        SolveStaticPlacement(shape, w, env().costs, true, env().exact);
    exact_ = p.exact;
    return std::move(p.state);
  }

  CacheAction Update(const DemandView&, const CacheState&) override {
    return {};
  }
};

class LruPolicy : public Policy {
 public:
  LruPolicy(PolicySpec spec, const PolicyEnvironment* env, bool single_copy)
      : Policy(std::move(spec), env), single_copy_(single_copy) {}

  CacheState Place(const DemandView& view, const CacheState& shape) override {
    const std::vector<std::int64_t> w =
        ScaleWeights(OfflineWeights(view, env().model.zipf_skew));
    PlacementResult p =
        SolveStaticPlacement(shape, w, env().costs, !single_copy_, env().exact);
    exact_ = p.exact;
    Observe(view);
    return std::move(p.state);
  }

  CacheAction Update(const DemandView& view, const CacheState& state) override {
    Observe(view);
    std::vector<int> budget(state.num_scbs());
    for (int m = 0; m < state.num_scbs(); ++m) {
      budget[m] =
          spec().r >= 0 ? spec().r : static_cast<int>(state.capacity(m));
    }
    return LruUpdate(state, view.current(), score_, budget, single_copy_);
  }

 private:
  void Observe(const DemandView& view) {
    const auto now = view.current();
    score_.resize(now.size(), 0.0);
    for (size_t n = 0; n < now.size(); ++n) {
      score_[n] = static_cast<double>(now[n]) + spec().lru_decay * score_[n];
    }
  }

  bool single_copy_;
  std::vector<double> score_;
};

class ForecastPolicy : public Policy {
 public:
  using Policy::Policy;

  CacheState Place(const DemandView& view, const CacheState& shape) override {
    return PlaceWithSolver(shape, Weights(view));
  }

  CacheAction Update(const DemandView& view, const CacheState& state) override {
    return UpdateWithSolver(state, Weights(view));
  }

 private:
  std::vector<double> Weights(const DemandView& view) const {
    switch (spec().kind) {
      case PolicyKind::kMyopic:
        return RollingHorizonWeights(env().model, view, 0);
      case PolicyKind::kOneStep:
        return OneStepWeights(view, env().model.zipf_skew);
      default:
        return RollingHorizonWeights(env().model, view, spec().horizon);
    }
  }
};

class LowerBoundPolicy : public Policy {
 public:
  using Policy::Policy;

  CacheState Place(const DemandView& view, const CacheState& shape) override {
    return Solve(view, shape);
  }

  CacheAction Update(const DemandView& view, const CacheState& state) override {
    return ActionBetween(state, Solve(view, state));
  }

  bool charges_updates() const override { return false; }

 private:
  CacheState Solve(const DemandView& view, const CacheState& shape) {
    const auto now = view.current();
    PlacementResult p = SolveStaticPlacement(shape, {now.begin(), now.end()},
                                             env().costs, true, env().exact);
    exact_ = exact_ && p.exact;
    return std::move(p.state);
  }
};

}  // namespace

std::unique_ptr<Policy> MakePolicy(const PolicySpec& spec,
                                   const PolicyEnvironment* env) {
  Require(env != nullptr, ErrorCode::kInvalidParameter,
          "policy needs an environment");
  Require(spec.horizon >= 0, ErrorCode::kValidationError,
          "policy horizon must be >= 0");
  Require(spec.lru_decay >= 0.0 && spec.lru_decay <= 1.0,
          ErrorCode::kValidationError, "lru decay must be in [0, 1]");
  switch (spec.kind) {
    case PolicyKind::kOffline:
      return std::make_unique<OfflinePolicy>(spec, env);
    case PolicyKind::kLruSingle:
      return std::make_unique<LruPolicy>(spec, env, true);
    case PolicyKind::kLruMulti:
      return std::make_unique<LruPolicy>(spec, env, false);
    case PolicyKind::kMyopic:
    case PolicyKind::kOneStep:
    case PolicyKind::kRollingHorizon:
      return std::make_unique<ForecastPolicy>(spec, env);
    case PolicyKind::kGreedyReplace: {
      PolicySpec greedy = spec;
      greedy.solver_mode = SolverMode::kGreedy;
      return std::make_unique<ForecastPolicy>(greedy, env);
    }
    case PolicyKind::kClairvoyantLB:
      return std::make_unique<LowerBoundPolicy>(spec, env);
  }
  throw Error(ErrorCode::kInvalidParameter, "unknown policy kind");
}

}  // namespace edgecache
