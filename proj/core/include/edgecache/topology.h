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

#ifndef EDGECACHE_TOPOLOGY_H_
#define EDGECACHE_TOPOLOGY_H_

#include <span>
#include <vector>

#include "edgecache/error.h"

namespace edgecache {

// A rows x cols grid of small-cell base stations (SCBSs), each linked to its
// 4-neighbours and directly to the macro-cell base station (MCBS).
//
// SCBSs are indexed 0..M-1 in row-major order. Users are indexed 0..U-1; by
// default there is one aggregate user per SCBS (user u is homed at SCBS u).
class GridTopology {
 public:
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_scbs() const { return rows_ * cols_; }
  int num_users() const { return static_cast<int>(user_home_.size()); }
  Cost hop_cost() const { return hop_cost_; }
  Cost mcbs_cost() const { return mcbs_cost_; }

  int home(int user) const;
  std::span<const int> neighbors(int scbs) const;
  int row_of(int scbs) const { return scbs / cols_; }
  int col_of(int scbs) const { return scbs % cols_; }

  // Rehomes users; `homes[u]` is the SCBS serving user u.
  void set_user_homes(std::vector<int> homes);

 private:
  friend GridTopology BuildGrid(int, int, Cost, Cost);
  friend int HopDistance(const GridTopology&, int, int);

  int rows_ = 0;
  int cols_ = 0;
  Cost hop_cost_ = 0;
  Cost mcbs_cost_ = 0;
  std::vector<int> user_home_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> distance_;  // M x M shortest hop counts
};

// Throws kInvalidParameter unless rows, cols >= 1, hop_cost >= 0 and
// mcbs_cost > hop_cost * ((rows - 1) + (cols - 1)).
GridTopology BuildGrid(int rows, int cols, Cost hop_cost, Cost mcbs_cost);

// Hops on a shortest grid path between two SCBSs.
int HopDistance(const GridTopology& topo, int m1, int m2);

// Delivery cost from each source to each user. Source 0 is the MCBS; SCBS m
// is source m + 1.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int num_scbs, int num_users, std::vector<Cost> entries);

  int num_scbs() const { return num_scbs_; }
  int num_users() const { return num_users_; }

  Cost mcbs(int user) const { return c_[user]; }
  Cost scbs(int m, int user) const {
    return c_[static_cast<size_t>(m + 1) * num_users_ + user];
  }
  // Sum over users of mcbs(u) - scbs(m, u): the per-request saving of
  // a single copy at SCBS m.
  Cost savings(int m) const { return savings_[m]; }
  Cost mcbs_total() const { return mcbs_total_; }

 private:
  int num_scbs_ = 0;
  int num_users_ = 0;
  std::vector<Cost> c_;
  std::vector<Cost> savings_;
  Cost mcbs_total_ = 0;
};

// c(m, u) = hop_cost * hops(home(u), m), c(MCBS, u) = mcbs_cost.
CostMatrix BuildCostMatrix(const GridTopology& topo);

}  // namespace edgecache

#endif  // EDGECACHE_TOPOLOGY_H_
