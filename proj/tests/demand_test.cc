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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "edgecache/error.h"

namespace edgecache {
namespace {

ArModel FlatModel(int stages, double sigma = 0.0) {
  ArModel m;
  m.beta = {0.6, 0.3, 0.1};
  m.mu_profile = FlatMuProfile(stages);
  m.noise_sigma = sigma;
  return m;
}

TEST(ForecastTest, OneStep) {
  const ArModel m = FlatModel(10);
  const std::vector<double> h = {10, 20, 30};
  // 0.6*10 + 0.3*20 + 0.1*30
  EXPECT_NEAR(Forecast(m, h, 1, 1), 15.0, 1e-12);
}

TEST(ForecastTest, TwoStepFeedsForecastBack) {
  const ArModel m = FlatModel(10);
  const std::vector<double> h = {10, 20, 30};
  // window becomes (15, 10, 20): 0.6*15 + 0.3*10 + 0.1*20
  EXPECT_NEAR(Forecast(m, h, 1, 2), 14.0, 1e-12);
}

TEST(ForecastTest, ConstantHistoryIsFixedPoint) {
  const ArModel m = FlatModel(10);
  const std::vector<double> h = {5, 5, 5};
  for (int steps = 1; steps <= 5; ++steps) {
    EXPECT_NEAR(Forecast(m, h, 2, steps), 5.0, 1e-12);
  }
}

TEST(ForecastTest, UsesStageScale) {
  ArModel m = FlatModel(4);
  m.mu_profile = {1.0, 2.0, 0.5, 1.0};
  const std::vector<double> h = {10, 20, 30};
  EXPECT_NEAR(Forecast(m, h, 1, 1), 30.0, 1e-12);  // mu(2) * 15
}

TEST(ForecastTest, LinearInHistory) {
  const ArModel m = FlatModel(10);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(0.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> h = {v(rng), v(rng), v(rng)};
    std::vector<double> h3 = {3 * h[0], 3 * h[1], 3 * h[2]};
    EXPECT_NEAR(Forecast(m, h3, 1, 3), 3 * Forecast(m, h, 1, 3), 1e-9);
  }
}

TEST(ForecastTest, Errors) {
  const ArModel m = FlatModel(5);
  const std::vector<double> short_history = {1, 2};
  try {
    Forecast(m, short_history, 1, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientHistory);
  }
  const std::vector<double> h = {1, 2, 3};
  EXPECT_THROW(Forecast(m, h, 4, 2), Error);
  EXPECT_NO_THROW(Forecast(m, h, 4, 1));
}

TEST(RealizeDemandTest, DeterministicModeEqualsForecast) {
  const ArModel m = FlatModel(5);
  std::mt19937_64 rng(1);
  const auto counts = RealizeDemand(m, {{10, 20, 30}, {0, 0, 0}}, 2, rng,
                                    RealizationMode::kDeterministic);
  EXPECT_EQ(counts[0], 15);
  EXPECT_EQ(counts[1], 0);
}

TEST(RealizeDemandTest, ZeroHistoryGivesZero) {
  const ArModel m = FlatModel(5, 3.0);
  std::mt19937_64 rng(9);
  // noise may push the mean up, so use the noiseless model for zero demand
  const ArModel quiet = FlatModel(5);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(RealizeDemand(quiet, {{0, 0, 0}}, 1, rng)[0], 0);
  }
  EXPECT_GE(RealizeDemand(m, {{0, 0, 0}}, 1, rng)[0], 0);
}

TEST(RealizeDemandTest, FixedSeedReproduces) {
  const ArModel m = FlatModel(5, 2.0);
  const std::vector<std::vector<double>> h = {{10, 20, 30}, {4, 4, 4}};
  std::mt19937_64 a(77);
  std::mt19937_64 b(77);
  EXPECT_EQ(RealizeDemand(m, h, 3, a), RealizeDemand(m, h, 3, b));
}

TEST(RealizeDemandTest, PoissonMeanMatchesForecast) {
  const ArModel m = FlatModel(5);
  const std::vector<double> h = {10, 20, 30};
  std::vector<std::vector<double>> windows(100000, h);
  std::mt19937_64 rng(2024);
  const auto counts = RealizeDemand(m, windows, 1, rng);
  const double mean =
      std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  const double expected = Forecast(m, h, 0, 1);
  // Poisson variance equals the mean.
  const double se = std::sqrt(expected / counts.size());
  EXPECT_NEAR(mean, expected, 3 * se);
}

TEST(ZipfTest, Examples) {
  EXPECT_EQ(ZipfPopularity(1, 0.8), std::vector<double>{1.0});
  const auto p = ZipfPopularity(2, 1.0);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
  EXPECT_THROW(ZipfPopularity(0, 1.0), Error);
  EXPECT_THROW(ZipfPopularity(3, 0.0), Error);
}

TEST(ZipfTest, NormalizedAndNonincreasing) {
  for (int n : {1, 7, 100, 5000}) {
    for (double s : {0.3, 0.8, 1.5}) {
      const auto p = ZipfPopularity(n, s);
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
      for (int k = 1; k < n; ++k) ASSERT_LE(p[k], p[k - 1]);
    }
  }
}

TEST(SpawnContentsTest, GrowthMatchesArrivals) {
  const ArModel m = FlatModel(24);
  std::mt19937_64 rng(5);
  Catalog cat;
  for (int i = 0; i < 10; ++i) cat.contents.push_back({i + 1, 1, 1, {}});
  for (int t = 1; t <= 24; ++t) cat = SpawnContents(cat, 1, t, m, 100.0, rng);
  EXPECT_EQ(cat.size(), 34);
  EXPECT_EQ(cat.size_at(5), 15);
  for (int i = 0; i < cat.size(); ++i) EXPECT_EQ(cat.contents[i].id, i + 1);
  EXPECT_EQ(cat.contents.back().birth_stage, 24);
  EXPECT_EQ(cat.contents.back().seed_history.size(), 3u);
}

TEST(SpawnContentsTest, ZeroArrivalsUnchanged) {
  const ArModel m = FlatModel(24);
  std::mt19937_64 rng(5);
  Catalog cat;
  cat.contents.push_back({1, 1, 1, {1, 1, 1}});
  EXPECT_EQ(SpawnContents(cat, 0, 3, m, 10.0, rng).size(), 1);
}

TEST(SpawnContentsTest, SeedMassIsAZipfShareOfTotalDemand) {
  const ArModel m = FlatModel(24);
  std::mt19937_64 rng(8);
  Catalog cat;
  for (int i = 0; i < 4; ++i) cat.contents.push_back({i + 1, 1, 1, {}});
  const auto p = ZipfPopularity(4, m.zipf_skew);
  for (int i = 0; i < 200; ++i) {
    const Catalog out = SpawnContents(cat, 1, 2, m, 50.0, rng);
    const double v = out.contents.back().seed_history.front();
    bool matches = false;
    for (double q : p) matches = matches || std::abs(v - 50.0 * q) < 1e-9;
    ASSERT_TRUE(matches) << v;
  }
}

TEST(GenerateTraceTest, ShapeAndDeterminism) {
  ArModel m = FlatModel(24, 2.0);
  m.mu_profile = DiurnalMuProfile(24, m.beta);
  TraceConfig cfg;
  cfg.initial_contents = 10;
  cfg.arrivals_per_stage = 1;
  const DemandTrace a = GenerateTrace(m, cfg, 42);
  const DemandTrace b = GenerateTrace(m, cfg, 42);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.num_stages(), 24);
  EXPECT_EQ(a.num_contents(1), 11);
  EXPECT_EQ(a.num_contents(24), 34);
  for (const auto& row : a.lambda) {
    for (auto v : row) EXPECT_GE(v, 0);
  }
  const DemandTrace c = GenerateTrace(m, cfg, 43);
  EXPECT_NE(a.lambda, c.lambda);
}

TEST(HistoryWindowTest, FallsBackToSeedThenZero) {
  DemandTrace trace;
  trace.catalog.contents.push_back({1, 1, 1, {7, 8}});
  trace.catalog.contents.push_back({2, 1, 3, {4, 4, 4}});
  trace.lambda = {{1}, {2}, {3, 9}};
  EXPECT_EQ(HistoryWindow(trace, 0, 3, 3), (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(HistoryWindow(trace, 0, 1, 4), (std::vector<double>{1, 7, 8, 0}));
  EXPECT_EQ(HistoryWindow(trace, 1, 3, 3), (std::vector<double>{9, 4, 4}));
}

TEST(DiurnalProfileTest, LevelsFollowTheCurve) {
  EXPECT_NEAR(DiurnalLevel(4), 0.3, 1e-12);
  EXPECT_NEAR(DiurnalLevel(12), 1.0, 1e-12);
  EXPECT_NEAR(DiurnalLevel(20), 1.0, 1e-12);
  EXPECT_NEAR(DiurnalLevel(8), 0.65, 1e-12);
  const std::vector<double> beta = {0.6, 0.3, 0.1};
  const auto mu = DiurnalMuProfile(24, beta);
  ASSERT_EQ(mu.size(), 24u);
  for (double v : mu) EXPECT_GT(v, 0.0);
  // Deterministic AR with this profile tracks the level curve.
  ArModel m;
  m.beta = beta;
  m.mu_profile = mu;
  std::vector<double> window = {0.6, 0.6, 0.6};
  for (int t = 1; t <= 24; ++t) {
    const double next = Forecast(m, window, t - 1, 1);
    EXPECT_NEAR(next, DiurnalLevel(t), 1e-9) << t;
    window.pop_back();
    window.insert(window.begin(), next);
  }
}

TEST(TraceCsvTest, RoundTrip) {
  const ArModel m = FlatModel(6, 1.0);
  TraceConfig cfg;
  cfg.initial_contents = 4;
  cfg.arrivals_per_stage = 1;
  const DemandTrace trace = GenerateTrace(m, cfg, 11);
  std::stringstream buffer;
  WriteTraceCsv(trace, buffer);
  EXPECT_EQ(buffer.str().rfind("stage,content_id,requests\n", 0), 0u);
  const DemandTrace back = ReadTraceCsv(buffer);
  for (int t = 1; t <= trace.num_stages(); ++t) {
    for (int n = 0; n < trace.num_contents(trace.num_stages()); ++n) {
      ASSERT_EQ(back.num_stages() >= t ? back.count(t, n) : 0,
                trace.count(t, n));
    }
  }
}

TEST(TraceCsvTest, ParseErrorsNameTheLine) {
  std::stringstream bad("stage,content_id,requests\n1,1,3\n2,x,4\n");
  try {
    ReadTraceCsv(bad);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::stringstream header("t,n,r\n");
  EXPECT_THROW(ReadTraceCsv(header), Error);
}

}  // namespace
}  // namespace edgecache
