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

#include "edgecache/topology.h"

#include <queue>
#include <string>
#include <utility>

namespace edgecache {

int GridTopology::home(int user) const {
  Require(user >= 0 && user < num_users(), ErrorCode::kIndexOutOfRange,
          "user index " + std::to_string(user) + " out of range");
  return user_home_[user];
}

std::span<const int> GridTopology::neighbors(int scbs) const {
  Require(scbs >= 0 && scbs < num_scbs(), ErrorCode::kIndexOutOfRange,
          "SCBS index " + std::to_string(scbs) + " out of range");
  return adjacency_[scbs];
}

void GridTopology::set_user_homes(std::vector<int> homes) {
  Require(!homes.empty(), ErrorCode::kInvalidParameter,
          "at least one user is required");
  for (int h : homes) {
    Require(h >= 0 && h < num_scbs(), ErrorCode::kInvalidParameter,
            "user home " + std::to_string(h) + " is not an SCBS");
  }
  user_home_ = std::move(homes);
}

GridTopology BuildGrid(int rows, int cols, Cost hop_cost, Cost mcbs_cost) {
  Require(rows >= 1 && cols >= 1, ErrorCode::kInvalidParameter,
          "grid needs at least one row and one column");
  Require(hop_cost >= 0, ErrorCode::kInvalidParameter,
          "hop_cost must be nonnegative");
  const Cost max_remote = hop_cost * ((rows - 1) + (cols - 1));
  Require(mcbs_cost > max_remote, ErrorCode::kInvalidParameter,
          "mcbs_cost " + std::to_string(mcbs_cost) +
              " must exceed the largest SCBS-to-SCBS cost " +
              std::to_string(max_remote));

  GridTopology topo;
  topo.rows_ = rows;
  topo.cols_ = cols;
  topo.hop_cost_ = hop_cost;
  topo.mcbs_cost_ = mcbs_cost;
  const int m_count = rows * cols;
  topo.adjacency_.resize(m_count);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      auto& adj = topo.adjacency_[r * cols + c];
      if (r > 0) adj.push_back((r - 1) * cols + c);
      if (c > 0) adj.push_back(r * cols + c - 1);
      if (c + 1 < cols) adj.push_back(r * cols + c + 1);
      if (r + 1 < rows) adj.push_back((r + 1) * cols + c);
    }
  }

  // All-pairs BFS over the link graph.
  topo.distance_.assign(static_cast<size_t>(m_count) * m_count, -1);
  for (int src = 0; src < m_count; ++src) {
    int* row = &topo.distance_[static_cast<size_t>(src) * m_count];
    std::queue<int> frontier;
    row[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      for (int w : topo.adjacency_[v]) {
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          frontier.push(w);
        }
      }
    }
  }

  topo.user_home_.resize(m_count);
  for (int u = 0; u < m_count; ++u) topo.user_home_[u] = u;
  return topo;
}

int HopDistance(const GridTopology& topo, int m1, int m2) {
  const int m_count = topo.num_scbs();
  Require(m1 >= 0 && m1 < m_count && m2 >= 0 && m2 < m_count,
          ErrorCode::kIndexOutOfRange, "SCBS index out of range");
  return topo.distance_[static_cast<size_t>(m1) * m_count + m2];
}

CostMatrix::CostMatrix(int num_scbs, int num_users, std::vector<Cost> entries)
    : num_scbs_(num_scbs), num_users_(num_users), c_(std::move(entries)) {
  Require(num_scbs >= 0 && num_users >= 1, ErrorCode::kInvalidParameter,
          "cost matrix needs at least one user");
  Require(c_.size() == static_cast<size_t>(num_scbs + 1) * num_users,
          ErrorCode::kInvalidParameter, "cost matrix has wrong size");
  for (int u = 0; u < num_users; ++u) {
    mcbs_total_ += mcbs(u);
    for (int m = 0; m < num_scbs; ++m) {
      Require(scbs(m, u) >= 0 && scbs(m, u) < mcbs(u),
              ErrorCode::kInvalidParameter,
              "every SCBS cost must be nonnegative and below the MCBS cost");
    }
  }
  savings_.assign(num_scbs, 0);
  for (int m = 0; m < num_scbs; ++m) {
    for (int u = 0; u < num_users; ++u) savings_[m] += mcbs(u) - scbs(m, u);
  }
}

CostMatrix BuildCostMatrix(const GridTopology& topo) {
  const int m_count = topo.num_scbs();
  const int u_count = topo.num_users();
  std::vector<Cost> c(static_cast<size_t>(m_count + 1) * u_count);
  for (int u = 0; u < u_count; ++u) {
    c[u] = topo.mcbs_cost();
    for (int m = 0; m < m_count; ++m) {
      c[static_cast<size_t>(m + 1) * u_count + u] =
          topo.hop_cost() * HopDistance(topo, topo.home(u), m);
    }
  }
  return CostMatrix(m_count, u_count, std::move(c));
}

}  // namespace edgecache
