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

#include "edgecache/demand.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "edgecache/error.h"

namespace edgecache {

int Catalog::size_at(int t) const {
  int count = 0;
  for (const Content& c : contents) count += c.birth_stage <= t ? 1 : 0;
  return count;
}

void ArModel::Validate() const {
  Require(!beta.empty(), ErrorCode::kInvalidParameter,
          "AR model needs at least one beta weight");
  double sum = 0.0;
  for (double b : beta) {
    Require(b >= 0.0, ErrorCode::kInvalidParameter,
            "beta weights must be nonnegative");
    sum += b;
  }
  Require(std::abs(sum - 1.0) < 1e-9, ErrorCode::kInvalidParameter,
          "beta weights must sum to 1");
  Require(!mu_profile.empty(), ErrorCode::kInvalidParameter,
          "mu profile needs one entry per stage");
  for (double m : mu_profile) {
    Require(m > 0.0, ErrorCode::kInvalidParameter,
            "mu profile entries must be positive");
  }
  Require(noise_sigma >= 0.0, ErrorCode::kInvalidParameter,
          "noise_sigma must be nonnegative");
  Require(zipf_skew > 0.0, ErrorCode::kInvalidParameter,
          "zipf_skew must be positive");
}

std::vector<double> FlatMuProfile(int num_stages) {
  return std::vector<double>(num_stages, 1.0);
}

double DiurnalLevel(double hour) {
  static constexpr std::array<std::pair<double, double>, 6> kPoints = {
      {{1.0, 0.6},
       {4.0, 0.3},
       {12.0, 1.0},
       {16.0, 0.7},
       {20.0, 1.0},
       {24.0, 0.6}}};
  if (hour <= kPoints.front().first) return kPoints.front().second;
  for (size_t i = 1; i < kPoints.size(); ++i) {
    const auto [x1, y1] = kPoints[i];
    if (hour <= x1) {
      const auto [x0, y0] = kPoints[i - 1];
      return y0 + (y1 - y0) * (hour - x0) / (x1 - x0);
    }
  }
  return kPoints.back().second;
}

std::vector<double> DiurnalMuProfile(int num_stages,
                                     std::span<const double> beta) {
  Require(num_stages >= 1, ErrorCode::kInvalidParameter,
          "profile needs at least one stage");
  auto level = [num_stages](int t) {
    if (t < 1) t = 1;
    const double hour =
        num_stages == 1 ? 1.0 : 1.0 + (t - 1) * 23.0 / (num_stages - 1);
    return DiurnalLevel(hour);
  };
  std::vector<double> mu(num_stages);
  for (int t = 1; t <= num_stages; ++t) {
    double lagged = 0.0;
    for (size_t k = 0; k < beta.size(); ++k) {
      lagged += beta[k] * level(t - 1 - static_cast<int>(k));
    }
    mu[t - 1] = level(t) / lagged;
  }
  return mu;
}

double Forecast(const ArModel& model, std::span<const double> history, int t,
                int steps) {
  const int depth = model.history_depth();
  Require(static_cast<int>(history.size()) >= depth,
          ErrorCode::kInsufficientHistory,
          "forecast needs " + std::to_string(depth) + " history values");
  Require(steps >= 1, ErrorCode::kInvalidParameter,
          "forecast needs steps >= 1");
  Require(t >= 0 && t + steps <= model.num_stages(),
          ErrorCode::kInvalidParameter, "forecast runs past the horizon");

  std::vector<double> window(history.begin(), history.begin() + depth);
  double value = 0.0;
  for (int s = 1; s <= steps; ++s) {
    double mean = 0.0;
    for (int k = 0; k < depth; ++k) mean += model.beta[k] * window[k];
    value = model.mu(t + s) * mean;
    window.pop_back();
    window.insert(window.begin(), value);
  }
  return value;
}

std::vector<std::int64_t> RealizeDemand(
    const ArModel& model, const std::vector<std::vector<double>>& histories,
    int t, std::mt19937_64& rng, RealizationMode mode) {
  Require(t >= 1 && t <= model.num_stages(), ErrorCode::kInvalidParameter,
          "stage out of range");
  const int depth = model.history_depth();
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::int64_t> counts(histories.size(), 0);
  for (size_t n = 0; n < histories.size(); ++n) {
    const auto& h = histories[n];
    Require(static_cast<int>(h.size()) >= depth,
            ErrorCode::kInsufficientHistory, "history window too short");
    double ar = 0.0;
    for (int k = 0; k < depth; ++k) ar += model.beta[k] * h[k];
    if (mode == RealizationMode::kDeterministic) {
      counts[n] = std::llround(std::max(0.0, model.mu(t) * ar));
      continue;
    }
    const double eps =
        model.noise_sigma > 0.0 ? model.noise_sigma * noise(rng) : 0.0;
    const double mean = std::max(0.0, model.mu(t) * (ar + eps));
    if (mean > 0.0) {
      std::poisson_distribution<std::int64_t> draw(mean);
      counts[n] = draw(rng);
    }
  }
  return counts;
}

std::vector<double> ZipfPopularity(int n, double skew) {
  Require(n >= 1, ErrorCode::kInvalidParameter, "Zipf popularity needs N >= 1");
  Require(skew > 0.0, ErrorCode::kInvalidParameter, "Zipf skew must be > 0");
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) p[k] = std::pow(k + 1.0, -skew);
  // Sum smallest-first to keep the normalisation tight.
  double norm = 0.0;
  for (int k = n - 1; k >= 0; --k) norm += p[k];
  for (double& v : p) v /= norm;
  return p;
}

Catalog SpawnContents(const Catalog& catalog, int arrivals, int t,
                      const ArModel& model, double total_demand,
                      std::mt19937_64& rng) {
  Require(arrivals >= 0, ErrorCode::kInvalidParameter,
          "arrivals must be nonnegative");
  Catalog out = catalog;
  if (arrivals == 0) return out;
  const int n_now = std::max(1, catalog.size());
  const std::vector<double> p = ZipfPopularity(n_now, model.zipf_skew);
  std::uniform_int_distribution<int> rank(0, n_now - 1);
  for (int i = 0; i < arrivals; ++i) {
    Content c;
    c.id = out.size() + 1;
    c.size = 1;
    c.birth_stage = t;
    c.seed_history.assign(model.history_depth(), p[rank(rng)] * total_demand);
    out.contents.push_back(std::move(c));
  }
  return out;
}

std::int64_t DemandTrace::count(int t, int n) const {
  const auto& row = lambda[t - 1];
  return n < static_cast<int>(row.size()) ? row[n] : 0;
}

std::int64_t DemandTrace::total(int t) const {
  const auto& row = lambda[t - 1];
  return std::accumulate(row.begin(), row.end(), std::int64_t{0});
}

std::vector<double> HistoryWindow(const DemandTrace& trace, int n, int t,
                                  int depth) {
  const Content& c = trace.catalog.contents[n];
  std::vector<double> window(depth, 0.0);
  for (int k = 0; k < depth; ++k) {
    const int s = t - k;
    if (s >= c.birth_stage && s >= 1) {
      window[k] = static_cast<double>(trace.count(s, n));
    } else {
      const int back = c.birth_stage - 1 - s;
      if (back >= 0 && back < static_cast<int>(c.seed_history.size())) {
        window[k] = c.seed_history[back];
      }
    }
  }
  return window;
}

DemandTrace GenerateTrace(const ArModel& model, const TraceConfig& config,
                          std::uint64_t seed, RealizationMode mode) {
  model.Validate();
  Require(config.initial_contents >= 1, ErrorCode::kInvalidParameter,
          "trace needs at least one initial content");
  Require(config.base_demand >= 0.0, ErrorCode::kInvalidParameter,
          "base_demand must be nonnegative");
  std::mt19937_64 rng(seed);
  const int depth = model.history_depth();
  const int n0 = config.initial_contents;

  DemandTrace trace;
  trace.rng_seed = seed;

  // Random rank assignment, then a previous-day tail around each mean.
  std::vector<int> ranks(n0);
  std::iota(ranks.begin(), ranks.end(), 0);
  std::shuffle(ranks.begin(), ranks.end(), rng);
  const std::vector<double> p = ZipfPopularity(n0, model.zipf_skew);
  for (int n = 0; n < n0; ++n) {
    Content c;
    c.id = n + 1;
    c.birth_stage = 1;
    const double mean = config.base_demand * n0 * p[ranks[n]];
    c.seed_history.resize(depth);
    for (int k = 0; k < depth; ++k) {
      if (mode == RealizationMode::kDeterministic || mean <= 0.0) {
        c.seed_history[k] = mean;
      } else {
        std::poisson_distribution<std::int64_t> draw(mean);
        c.seed_history[k] = static_cast<double>(draw(rng));
      }
    }
    trace.catalog.contents.push_back(std::move(c));
  }

  double previous_total = 0.0;
  for (const Content& c : trace.catalog.contents) {
    previous_total += c.seed_history.front();
  }
  for (int t = 1; t <= model.num_stages(); ++t) {
    trace.catalog = SpawnContents(trace.catalog, config.arrivals_per_stage, t,
                                  model, previous_total, rng);
    const int n_t = trace.catalog.size();
    std::vector<std::vector<double>> windows(n_t);
    // Stage t is not in the table yet, so a window ending at t - 1 is needed.
    trace.lambda.emplace_back();
    for (int n = 0; n < n_t; ++n) {
      windows[n] = HistoryWindow(trace, n, t - 1, depth);
    }
    trace.lambda.back() = RealizeDemand(model, windows, t, rng, mode);
    previous_total = static_cast<double>(trace.total(t));
  }
  return trace;
}

void WriteTraceCsv(const DemandTrace& trace, std::ostream& out) {
  out << "stage,content_id,requests\n";
  for (int t = 1; t <= trace.num_stages(); ++t) {
    for (int n = 0; n < trace.num_contents(t); ++n) {
      const std::int64_t c = trace.count(t, n);
      if (c > 0) {
        out << t << ',' << trace.catalog.contents[n].id << ',' << c << '\n';
      }
    }
  }
}

DemandTrace ReadTraceCsv(std::istream& in) {
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParseError,
          "trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Require(line == "stage,content_id,requests", ErrorCode::kParseError,
          "line 1: expected header 'stage,content_id,requests'");

  struct Row {
    int stage;
    int id;
    std::int64_t requests;
  };
  std::vector<Row> rows;
  int max_stage = 0;
  int max_id = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    Row r{};
    char c1 = 0;
    char c2 = 0;
    if (!(fields >> r.stage >> c1 >> r.id >> c2 >> r.requests) || c1 != ',' ||
        c2 != ',' || r.stage < 1 || r.id < 1 || r.requests < 0) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                              ": malformed row '" + line + "'");
    }
    max_stage = std::max(max_stage, r.stage);
    max_id = std::max(max_id, r.id);
    rows.push_back(r);
  }

  DemandTrace trace;
  for (int n = 0; n < max_id; ++n) {
    Content c;
    c.id = n + 1;
    trace.catalog.contents.push_back(std::move(c));
  }
  trace.lambda.assign(max_stage, std::vector<std::int64_t>(max_id, 0));
  for (const Row& r : rows) trace.lambda[r.stage - 1][r.id - 1] = r.requests;
  return trace;
}

}  // namespace edgecache
