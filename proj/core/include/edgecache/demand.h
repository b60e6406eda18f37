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

#ifndef EDGECACHE_DEMAND_H_
#define EDGECACHE_DEMAND_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace edgecache {

struct Content {
  int id = 0;    // 1-based, creation order
  int size = 1;  // capacity units
  int birth_stage = 1;
  // Request counts assumed for the stages before `birth_stage`, most recent
  // first. For contents present at stage 1 this is the previous day's tail;
  // for later arrivals it is the initial-popularity estimate.
  std::vector<double> seed_history;
};

struct Catalog {
  std::vector<Content> contents;

  int size() const { return static_cast<int>(contents.size()); }
  // Number of contents born at or before stage t.
  int size_at(int t) const;
};

// Auto-regressive demand model: the expected request count of a content at
// stage t is mu(t) * sum_k beta[k] * lambda(t - 1 - k), plus noise.
struct ArModel {
  std::vector<double> beta;        // history weights, most recent first
  std::vector<double> mu_profile;  // one positive scale factor per stage
  double noise_sigma = 0.0;
  double zipf_skew = 0.8;

  int history_depth() const { return static_cast<int>(beta.size()); }
  int num_stages() const { return static_cast<int>(mu_profile.size()); }
  double mu(int t) const { return mu_profile[t - 1]; }

  // Throws kInvalidParameter when beta is empty, negative or does not sum to
  // one, or when any mu is not positive.
  void Validate() const;
};

std::vector<double> FlatMuProfile(int num_stages);

// Per-stage factors under which the expected demand follows a two-peak daily
// level curve (trough 0.3 at stage 4, peaks 1.0 at stages 12 and 20, linear
// in between). Because the AR mean is a beta-weighted average of earlier
// stages, mu(t) = level(t) / sum_k beta[k] * level(t - 1 - k); levels before
// stage 1 are held at level(1). Stage positions are rescaled when
// num_stages != 24.
std::vector<double> DiurnalMuProfile(int num_stages,
                                     std::span<const double> beta);
double DiurnalLevel(double hour);

// Expected demand `steps` stages after stage t with zero noise. `history`
// holds at least H values, most recent (stage t) first; each intermediate
// forecast is fed back into the window.
double Forecast(const ArModel& model, std::span<const double> history, int t,
                int steps);

enum class RealizationMode {
  kPoisson,        // Normal noise inside the AR mean, Poisson counts
  kDeterministic,  // no noise, counts are the rounded mean
};

// Realized counts for stage t. `histories[n]` is content n's window ending
// at stage t - 1, most recent first.
std::vector<std::int64_t> RealizeDemand(
    const ArModel& model, const std::vector<std::vector<double>>& histories,
    int t, std::mt19937_64& rng,
    RealizationMode mode = RealizationMode::kPoisson);

// p_n proportional to n^-skew for ranks n = 1..N.
std::vector<double> ZipfPopularity(int n, double skew);

// Appends `arrivals` unit-size contents born at stage t. Each gets a uniform
// rank r in 1..N and a flat seed history of zipf(N)[r] * total_demand, where
// total_demand is the network-wide request count of the previous stage.
Catalog SpawnContents(const Catalog& catalog, int arrivals, int t,
                      const ArModel& model, double total_demand,
                      std::mt19937_64& rng);

struct DemandTrace {
  Catalog catalog;
  // lambda[t - 1][n] for contents born by stage t.
  std::vector<std::vector<std::int64_t>> lambda;
  std::uint64_t rng_seed = 0;

  int num_stages() const { return static_cast<int>(lambda.size()); }
  int num_contents(int t) const {
    return static_cast<int>(lambda[t - 1].size());
  }
  // Zero for contents not yet born.
  std::int64_t count(int t, int n) const;
  std::int64_t total(int t) const;
};

// The last `depth` request counts of content n up to and including stage t,
// most recent first. Stages before birth come from the seed history; beyond
// that the window is zero-padded. t may be 0.
std::vector<double> HistoryWindow(const DemandTrace& trace, int n, int t,
                                  int depth);

struct TraceConfig {
  int initial_contents = 10;
  int arrivals_per_stage = 0;
  // Mean per-content demand of the seed history.
  double base_demand = 10.0;
};

DemandTrace GenerateTrace(const ArModel& model, const TraceConfig& config,
                          std::uint64_t seed,
                          RealizationMode mode = RealizationMode::kPoisson);

// CSV with header `stage,content_id,requests`, one row per positive count.
void WriteTraceCsv(const DemandTrace& trace, std::ostream& out);
DemandTrace ReadTraceCsv(std::istream& in);

}  // namespace edgecache

#endif  // EDGECACHE_DEMAND_H_
