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

#include "edgecache/cache.h"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace edgecache {

CacheState::CacheState(int num_contents, std::vector<std::int64_t> capacities,
                       std::vector<std::int64_t> sizes)
    : num_contents_(num_contents), capacity_(std::move(capacities)) {
  Require(num_contents >= 0, ErrorCode::kInvalidParameter,
          "negative content count");
  for (std::int64_t b : capacity_) {
    Require(b >= 0, ErrorCode::kInvalidParameter,
            "capacities must be nonnegative");
  }
  if (sizes.empty()) sizes.assign(num_contents, 1);
  Require(static_cast<int>(sizes.size()) == num_contents,
          ErrorCode::kInvalidParameter, "one size per content is required");
  for (std::int64_t v : sizes) {
    Require(v >= 1, ErrorCode::kInvalidParameter, "content sizes must be >= 1");
  }
  size_ = std::move(sizes);
  x_.assign(static_cast<size_t>(num_contents) * capacity_.size(), 0);
  used_.assign(capacity_.size(), 0);
}

void CacheState::set(int n, int m, bool value) {
  auto& cell = x_[static_cast<size_t>(n) * num_scbs() + m];
  if ((cell != 0) == value) return;
  cell = value ? 1 : 0;
  used_[m] += value ? size_[n] : -size_[n];
}

int CacheState::copies(int n) const {
  int count = 0;
  for (int m = 0; m < num_scbs(); ++m) count += cached(n, m) ? 1 : 0;
  return count;
}

std::uint64_t CacheState::copy_mask(int n) const {
  std::uint64_t mask = 0;
  for (int m = 0; m < num_scbs(); ++m) {
    if (cached(n, m)) mask |= std::uint64_t{1} << m;
  }
  return mask;
}

int CacheState::num_cached() const {
  return static_cast<int>(std::count(x_.begin(), x_.end(), 1));
}

bool CacheState::fits() const {
  for (int m = 0; m < num_scbs(); ++m) {
    if (used_[m] > capacity_[m]) return false;
  }
  return true;
}

bool CacheState::single_copy() const {
  for (int n = 0; n < num_contents_; ++n) {
    if (copies(n) > 1) return false;
  }
  return true;
}

bool CacheState::unit_sizes() const {
  return std::all_of(size_.begin(), size_.end(),
                     [](std::int64_t v) { return v == 1; });
}

void CacheState::AddContents(int count, std::int64_t size) {
  Require(count >= 0 && size >= 1, ErrorCode::kInvalidParameter,
          "invalid content growth");
  num_contents_ += count;
  size_.resize(num_contents_, size);
  x_.resize(static_cast<size_t>(num_contents_) * num_scbs(), 0);
}

void CacheAction::Normalize() {
  std::sort(adds.begin(), adds.end());
  std::sort(evicts.begin(), evicts.end());
}

CacheAction ActionBetween(const CacheState& from, const CacheState& to) {
  Require(from.num_contents() == to.num_contents() &&
              from.num_scbs() == to.num_scbs(),
          ErrorCode::kInvalidParameter, "state dimensions differ");
  CacheAction action;
  for (int n = 0; n < from.num_contents(); ++n) {
    for (int m = 0; m < from.num_scbs(); ++m) {
      const bool before = from.cached(n, m);
      const bool after = to.cached(n, m);
      if (!before && after) action.adds.push_back({n, m});
      if (before && !after) action.evicts.push_back({n, m});
    }
  }
  return action;
}

bool IsFeasible(const CacheState& state, const CacheAction& action) {
  const int n_count = state.num_contents();
  const int m_count = state.num_scbs();
  auto in_range = [&](const Placement& p) {
    return p.content >= 0 && p.content < n_count && p.scbs >= 0 &&
           p.scbs < m_count;
  };
  std::set<Placement> touched;
  std::vector<std::int64_t> used(m_count);
  for (int m = 0; m < m_count; ++m) used[m] = state.used(m);
  for (const Placement& p : action.adds) {
    if (!in_range(p) || state.cached(p.content, p.scbs)) return false;
    if (!touched.insert(p).second) return false;
    used[p.scbs] += state.size_of(p.content);
  }
  for (const Placement& p : action.evicts) {
    if (!in_range(p) || !state.cached(p.content, p.scbs)) return false;
    if (!touched.insert(p).second) return false;
    used[p.scbs] -= state.size_of(p.content);
  }
  for (int m = 0; m < m_count; ++m) {
    if (used[m] > state.capacity(m)) return false;
  }
  return true;
}

CacheState ApplyAction(const CacheState& state, const CacheAction& action) {
  Require(IsFeasible(state, action), ErrorCode::kInfeasibleAction,
          "action violates the feasible action set");
  CacheState next = state;
  for (const Placement& p : action.evicts) next.set(p.content, p.scbs, false);
  for (const Placement& p : action.adds) next.set(p.content, p.scbs, true);
  return next;
}

Cost UpdatePenalty(const CacheAction& action, Cost gamma) {
  Require(gamma >= 0, ErrorCode::kInvalidParameter, "gamma must be >= 0");
  return gamma * action.num_changes();
}

Cost ContentServingCost(const CacheState& state, int n, std::int64_t w,
                        const CostMatrix& costs) {
  if (w == 0) return 0;
  const int m_count = state.num_scbs();
  Cost per_request = 0;
  for (int u = 0; u < costs.num_users(); ++u) {
    Cost best = costs.mcbs(u);
    for (int m = 0; m < m_count; ++m) {
      if (state.cached(n, m)) best = std::min(best, costs.scbs(m, u));
    }
    per_request += best;
  }
  return w * per_request;
}

Cost ServingCost(const CacheState& state, std::span<const std::int64_t> weights,
                 const CostMatrix& costs) {
  Require(static_cast<int>(weights.size()) == state.num_contents(),
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Require(costs.num_scbs() == state.num_scbs(), ErrorCode::kInvalidParameter,
          "cost matrix and state disagree on the SCBS count");
  Cost total = 0;
  for (int n = 0; n < state.num_contents(); ++n) {
    Require(weights[n] >= 0, ErrorCode::kInvalidParameter,
            "weights must be nonnegative");
    total += ContentServingCost(state, n, weights[n], costs);
  }
  return total;
}

Cost ServingCostBruteForce(const CacheState& state,
                           std::span<const std::int64_t> weights,
                           const CostMatrix& costs,
                           std::int64_t max_assignments) {
  const int n_count = state.num_contents();
  const int m_count = state.num_scbs();
  const int u_count = costs.num_users();
  Require(static_cast<int>(weights.size()) == n_count,
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Require(m_count + 1 < 62, ErrorCode::kInstanceTooLarge,
          "too many sources to enumerate");
  const std::int64_t vectors = std::int64_t{1} << (m_count + 1);
  Require(
      static_cast<std::int64_t>(n_count) * u_count <= max_assignments / vectors,
      ErrorCode::kInstanceTooLarge,
      "delivery problem too large for enumeration");

  // Source s = 0 is the MCBS; s >= 1 is SCBS s - 1.
  auto source_cost = [&](int s, int u) {
    return s == 0 ? costs.mcbs(u) : costs.scbs(s - 1, u);
  };
  auto available = [&](int n, int s) {
    return s == 0 || state.cached(n, s - 1);
  };

  Cost total = 0;
  for (int n = 0; n < n_count; ++n) {
    for (int u = 0; u < u_count; ++u) {
      Cost best = std::numeric_limits<Cost>::max();
      for (std::int64_t y = 0; y < vectors; ++y) {
        int served = 0;
        bool admissible = true;
        Cost objective = 0;
        for (int s = 0; s <= m_count; ++s) {
          if (((y >> s) & 1) == 0) continue;
          ++served;
          if (!available(n, s)) admissible = false;
          objective += weights[n] * source_cost(s, u);
        }
        if (served == 1 && admissible) best = std::min(best, objective);
      }
      total += best;
    }
  }
  return total;
}

Cost SingleCopyCost(const CacheState& state,
                    std::span<const std::int64_t> weights,
                    const CostMatrix& costs) {
  Require(static_cast<int>(weights.size()) == state.num_contents(),
          ErrorCode::kInvalidParameter, "one weight per content is required");
  Cost total = 0;
  for (int n = 0; n < state.num_contents(); ++n) {
    Require(state.copies(n) <= 1, ErrorCode::kMultiCopyState,
            "content " + std::to_string(n) + " has more than one copy");
    Cost per_request = 0;
    for (int u = 0; u < costs.num_users(); ++u) {
      Cost cached_sum = 0;
      Cost share = 1;
      for (int m = 0; m < state.num_scbs(); ++m) {
        if (state.cached(n, m)) {
          cached_sum += costs.scbs(m, u);
          share -= 1;
        }
      }
      per_request += costs.mcbs(u) * share + cached_sum;
    }
    total += weights[n] * per_request;
  }
  return total;
}

namespace {

std::uint64_t CheckedMul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  Require(!__builtin_mul_overflow(a, b, &out), ErrorCode::kOverflow,
          "state count overflows 64 bits");
  return out;
}

std::uint64_t CheckedAdd(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  Require(!__builtin_add_overflow(a, b, &out), ErrorCode::kOverflow,
          "state count overflows 64 bits");
  return out;
}

}  // namespace

std::uint64_t CountStates(int num_contents, int num_scbs, int capacity) {
  Require(num_contents >= 0 && num_scbs >= 0 && capacity >= 0,
          ErrorCode::kInvalidParameter, "negative state-count argument");
  // Sum of C(N, l) for l = 0..min(b, N), with C(N, l) built incrementally.
  std::uint64_t per_scbs = 0;
  std::uint64_t binom = 1;
  const int top = std::min(capacity, num_contents);
  for (int l = 0; l <= top; ++l) {
    per_scbs = CheckedAdd(per_scbs, binom);
    // C(N, l+1) = C(N, l) * (N - l) / (l + 1); divide first where exact.
    const std::uint64_t num = static_cast<std::uint64_t>(num_contents - l);
    const std::uint64_t den = static_cast<std::uint64_t>(l + 1);
    const std::uint64_t g = std::gcd(binom, den);
    binom = CheckedMul(binom / g, num / (den / g));
  }
  std::uint64_t total = 1;
  for (int m = 0; m < num_scbs; ++m) total = CheckedMul(total, per_scbs);
  return total;
}

void WriteCacheStateCsv(const CacheState& state, std::ostream& out) {
  out << "content_id,scbs_id\n";
  for (int n = 0; n < state.num_contents(); ++n) {
    for (int m = 0; m < state.num_scbs(); ++m) {
      if (state.cached(n, m)) out << n + 1 << ',' << m + 1 << '\n';
    }
  }
}

CacheState ReadCacheStateCsv(std::istream& in, int num_contents,
                             std::vector<std::int64_t> capacities) {
  CacheState state(num_contents, std::move(capacities));
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParseError,
          "cache state CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Require(line == "content_id,scbs_id", ErrorCode::kParseError,
          "line 1: expected header 'content_id,scbs_id'");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    int n = 0;
    int m = 0;
    char comma = 0;
    if (!(fields >> n >> comma >> m) || comma != ',' || n < 1 ||
        n > num_contents || m < 1 || m > state.num_scbs()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                              ": bad pair '" + line + "'");
    }
    state.set(n - 1, m - 1, true);
  }
  Require(state.fits(), ErrorCode::kValidationError,
          "cache state exceeds a capacity");
  return state;
}

}  // namespace edgecache
