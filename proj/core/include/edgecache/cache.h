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

#ifndef EDGECACHE_CACHE_H_
#define EDGECACHE_CACHE_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "edgecache/error.h"
#include "edgecache/topology.h"

namespace edgecache {

// Cache configuration x(n, m): whether content n sits in SCBS m's cache.
// Contents and SCBSs are 0-based.
class CacheState {
 public:
  CacheState() = default;
  // Empty caches. `sizes` defaults to unit sizes.
  CacheState(int num_contents, std::vector<std::int64_t> capacities,
             std::vector<std::int64_t> sizes = {});

  int num_contents() const { return num_contents_; }
  int num_scbs() const { return static_cast<int>(capacity_.size()); }

  bool cached(int n, int m) const {
    return x_[static_cast<size_t>(n) * num_scbs() + m] != 0;
  }
  // Unchecked with respect to capacity; see fits().
  void set(int n, int m, bool value);

  std::int64_t size_of(int n) const { return size_[n]; }
  std::int64_t capacity(int m) const { return capacity_[m]; }
  std::int64_t used(int m) const { return used_[m]; }
  std::span<const std::int64_t> capacities() const { return capacity_; }
  std::span<const std::int64_t> sizes() const { return size_; }

  int copies(int n) const;
  // Bit m set iff content n is cached at SCBS m. Requires M <= 64.
  std::uint64_t copy_mask(int n) const;
  int num_cached() const;

  bool fits() const;
  bool single_copy() const;
  bool unit_sizes() const;

  // Grows the catalog with `count` uncached contents.
  void AddContents(int count, std::int64_t size = 1);

  friend bool operator==(const CacheState& a, const CacheState& b) {
    return a.num_contents_ == b.num_contents_ && a.x_ == b.x_ &&
           a.capacity_ == b.capacity_ && a.size_ == b.size_;
  }

 private:
  int num_contents_ = 0;
  std::vector<std::uint8_t> x_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> used_;
  std::vector<std::int64_t> size_;
};

struct Placement {
  int content = 0;
  int scbs = 0;
  friend auto operator<=>(const Placement&, const Placement&) = default;
};

struct CacheAction {
  std::vector<Placement> adds;
  std::vector<Placement> evicts;

  int num_changes() const {
    return static_cast<int>(adds.size() + evicts.size());
  }
  bool empty() const { return adds.empty() && evicts.empty(); }
  // Sorts both lists.
  void Normalize();
  friend bool operator==(const CacheAction&, const CacheAction&) = default;
};

// The action that turns `from` into `to` (same dimensions).
CacheAction ActionBetween(const CacheState& from, const CacheState& to);

// Adds only uncached pairs, evicts only cached pairs, never touches a pair
// twice, and leaves every SCBS within capacity.
bool IsFeasible(const CacheState& state, const CacheAction& action);

// Throws kInfeasibleAction when !IsFeasible(state, action).
CacheState ApplyAction(const CacheState& state, const CacheAction& action);

Cost UpdatePenalty(const CacheAction& action, Cost gamma);

// Optimal delivery cost of the inner problem: every (content, user) request
// is served from its cheapest source holding the content, so the result is
// sum_n w_n sum_u min(c0(u), min over copies m of c(m, u)). The weight unit
// carries through; integer request counts give cost units.
Cost ServingCost(const CacheState& state, std::span<const std::int64_t> weights,
                 const CostMatrix& costs);

// Delivery cost of content n alone for weight w.
Cost ContentServingCost(const CacheState& state, int n, std::int64_t w,
                        const CostMatrix& costs);

// Reference evaluation of the delivery problem: for every (content, user)
// pair, enumerates all 0/1 source vectors y over {MCBS} + SCBSs, keeps those
// with sum(y) = 1 and y <= x, and takes the cheapest. Throws
// kInstanceTooLarge beyond `max_assignments` enumerated vectors.
Cost ServingCostBruteForce(const CacheState& state,
                           std::span<const std::int64_t> weights,
                           const CostMatrix& costs,
                           std::int64_t max_assignments = 1'000'000);

// Closed form valid when every content has at most one copy:
// sum_n w_n sum_u [c0(u) (1 - sum_m x) + sum_m c(m, u) x]. Throws
// kMultiCopyState otherwise.
Cost SingleCopyCost(const CacheState& state,
                    std::span<const std::int64_t> weights,
                    const CostMatrix& costs);

// (sum_{l=0..b} C(N, l))^M, the number of cache configurations with unit
// sizes and uniform capacity b. Throws kOverflow past 2^64 - 1.
std::uint64_t CountStates(int num_contents, int num_scbs, int capacity);

// `content_id,scbs_id` rows, both 1-based.
void WriteCacheStateCsv(const CacheState& state, std::ostream& out);
// Reads pairs into an empty state with the given shape.
CacheState ReadCacheStateCsv(std::istream& in, int num_contents,
                             std::vector<std::int64_t> capacities);

}  // namespace edgecache

#endif  // EDGECACHE_CACHE_H_
