// Copyright 2026 The Compass Codes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "compass/threshold.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace compass {
namespace {

// Logistic finite-size model with exact crossing at p0.
double model_rate(double p, double p0, std::size_t L) {
  double x = (p - p0) * std::sqrt(double(L)) * 20.0;
  return 0.5 / (1.0 + std::exp(-x)) * 0.6;
}

std::vector<CurvePoint> exact_curve(const std::vector<double>& grid, double p0, std::size_t L,
                                    std::uint64_t n) {
  std::vector<CurvePoint> c;
  for (double p : grid) {
    c.push_back({p, n, static_cast<std::uint64_t>(std::llround(model_rate(p, p0, L) * double(n)))});
  }
  return c;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(a + (b - a) * k / (n - 1));
  return g;
}

TEST(Crossing, RecoversExactModelCrossing) {
  auto g = grid(0.13, 0.17, 9);
  auto small = exact_curve(g, 0.1525, 17, 1000000);
  auto large = exact_curve(g, 0.1525, 33, 1000000);
  auto c = locate_crossing(small, large);
  ASSERT_TRUE(c.found);
  EXPECT_NEAR(c.p, 0.1525, 5e-4);
}

TEST(Crossing, NoSignChangeMeansNoCrossing) {
  auto g = grid(0.05, 0.25, 9);
  std::vector<CurvePoint> small, large;
  for (double p : g) {
    small.push_back({p, 1000, static_cast<std::uint64_t>(p * 1000)});
    large.push_back({p, 1000, static_cast<std::uint64_t>(p * 2000)});
  }
  EXPECT_FALSE(locate_crossing(small, large).found);
  // Reversed order: larger always better, crossing beyond the grid.
  EXPECT_FALSE(locate_crossing(large, small).found);
  auto b = bootstrap_crossing(small, large, 50, 1);
  EXPECT_FALSE(b.found);
}

TEST(Crossing, TiedPointInsideTransition) {
  std::vector<CurvePoint> small{{0.1, 2000, 44}, {0.2, 2000, 82}, {0.3, 2000, 153}, {0.4, 2000, 229}};
  std::vector<CurvePoint> large{{0.1, 2000, 32}, {0.2, 2000, 82}, {0.3, 2000, 173}, {0.4, 2000, 279}};
  auto c = locate_crossing(small, large);
  ASSERT_TRUE(c.found);
  EXPECT_GT(c.p, 0.1);
  EXPECT_LT(c.p, 0.3);
}

TEST(Crossing, MismatchedGridsRejected) {
  std::vector<CurvePoint> a{{0.1, 10, 1}, {0.2, 10, 2}};
  std::vector<CurvePoint> b{{0.1, 10, 1}, {0.3, 10, 2}};
  EXPECT_THROW(locate_crossing(a, b), std::invalid_argument);
}

TEST(Crossing, BootstrapIntervalCoversTruth) {
  auto g = grid(0.13, 0.17, 9);
  std::mt19937_64 rng(3);
  int covered = 0;
  const int reps = 40;
  for (int r = 0; r < reps; ++r) {
    std::vector<CurvePoint> small, large;
    for (double p : g) {
      std::binomial_distribution<std::uint64_t> ds(20000, model_rate(p, 0.15, 17));
      std::binomial_distribution<std::uint64_t> dl(20000, model_rate(p, 0.15, 33));
      small.push_back({p, 20000, ds(rng)});
      large.push_back({p, 20000, dl(rng)});
    }
    auto c = bootstrap_crossing(small, large, 200, r);
    ASSERT_TRUE(c.found);
    EXPECT_LE(c.ci_low, c.p);
    EXPECT_GE(c.ci_high, c.p);
    if (c.ci_low <= 0.15 && 0.15 <= c.ci_high) ++covered;
  }
  EXPECT_GE(covered, 33);  // nominal 95%
}

TEST(Pseudothreshold, LinearInterpolation) {
  std::vector<CurvePoint> c{{0.1, 100, 5}, {0.2, 100, 10}, {0.3, 100, 40}};
  // g = -0.05, -0.1, +0.1 -> root at 0.25
  EXPECT_NEAR(pseudothreshold(c), 0.25, 1e-12);
  std::vector<CurvePoint> never{{0.1, 100, 0}, {0.2, 100, 1}};
  EXPECT_TRUE(std::isnan(pseudothreshold(never)));
}

TEST(BiasAlgebra, TableRowReconstructs) {
  auto o = optimal_bias(0.157, 0.054);
  EXPECT_NEAR(o.eta_opt, 2.407, 1e-3);
  EXPECT_NEAR(o.p_thr, 0.184, 1e-3);
  auto s = optimal_bias(0.10, 0.10);
  EXPECT_NEAR(s.eta_opt, 0.5, 1e-12);
  EXPECT_NEAR(s.p_thr, 0.15, 1e-12);
  // At the optimum both species hit their thresholds together.
  auto ch = channel_from_bias(o.p_thr, o.eta_opt);
  EXPECT_NEAR(ch.rates.z_marginal(), 0.157, 1e-9);
  EXPECT_NEAR(ch.rates.x_marginal(), 0.054, 1e-9);
  for (double eta : {0.1, 1.0, 2.0, 3.0, 10.0}) {
    EXPECT_LE(threshold_at_bias(0.157, 0.054, eta), o.p_thr + 1e-12);
  }
  EXPECT_EQ(threshold_at_bias(0.157, 0.054, std::numeric_limits<double>::infinity()), 0.157);
}

TEST(Threshold, RequiresTwoSizes) {
  ThresholdConfig c;
  c.sizes = {5};
  c.p_grid = {0.1, 0.2};
  c.trials = 10;
  EXPECT_THROW(estimate_threshold(c), std::invalid_argument);
}

TEST(Threshold, SmallSurfaceCodeCrossingIsPlausible) {
  ThresholdConfig c;
  c.base.family = CodeFamily::kElongated;
  c.base.ell = 2;
  c.base.eta = 0.5;
  c.base.workers = 1;
  c.base.master_seed = 11;
  c.sizes = {5, 9};
  c.p_grid = grid(0.08, 0.22, 8);
  c.trials = 3000;
  c.bootstrap = 100;
  int seen = 0;
  auto est = estimate_threshold(c, [&](const TrialBatch&) { ++seen; });
  EXPECT_EQ(seen, 16);
  ASSERT_EQ(est.batches.size(), 16u);
  EXPECT_EQ(est.batches[8].config.L, 9u);
  ASSERT_TRUE(est.crossing.found);
  EXPECT_GT(est.crossing.p, 0.11);
  EXPECT_LT(est.crossing.p, 0.19);
  EXPECT_EQ(est.pseudothresholds.size(), 2u);
  auto again = analyze_threshold(est.batches, est.sizes, est.p_grid, FailureMetric::kAny, 100, 11);
  EXPECT_EQ(again.crossing.p, est.crossing.p);
  EXPECT_EQ(again.crossing.ci_low, est.crossing.ci_low);
}

TEST(Threshold, BaconShorHasNoCrossing) {
  ThresholdConfig c;
  c.base.family = CodeFamily::kSurfaceDensity;
  c.base.q_surf = 0.0;
  c.base.eta = std::numeric_limits<double>::infinity();
  c.base.decode_x = false;
  c.base.workers = 1;
  c.sizes = {9, 17};
  c.p_grid = grid(0.04, 0.2, 5);
  c.trials = 2000;
  c.metric = FailureMetric::kZ;
  c.bootstrap = 0;
  EXPECT_FALSE(estimate_threshold(c).crossing.found);
}

TEST(Confirm, ReportsBothSides) {
  BatchConfig b;
  b.family = CodeFamily::kElongated;
  b.ell = 2;
  b.eta = 0.5;
  b.workers = 1;
  auto conf = confirm_threshold(b, 15, 0.05, 0.3, 400, FailureMetric::kAny);
  EXPECT_TRUE(conf.below_near_zero);
  EXPECT_TRUE(conf.above_saturated);
  EXPECT_EQ(conf.below.config.L, 15u);
}

TEST(SweepBias, StructureAndOptimumNearDepolarizingForSurfaceCode) {
  ThresholdConfig c;
  c.base.family = CodeFamily::kElongated;
  c.base.ell = 2;
  c.base.workers = 1;
  c.sizes = {5, 9};
  c.p_grid = grid(0.06, 0.26, 11);
  c.trials = 2000;
  c.bootstrap = 0;
  std::vector<double> etas{0.25, 0.5, 1.0};
  std::vector<double> baseline{0.5, 0.5, 0.0};
  auto sweep = sweep_bias(c, etas, baseline);
  ASSERT_EQ(sweep.points.size(), 3u);
  for (const auto& pt : sweep.points) {
    EXPECT_EQ(pt.estimate.batches.front().config.eta, pt.eta);
    EXPECT_TRUE(pt.z.found);
    EXPECT_TRUE(pt.x.found);
  }
  EXPECT_GT(sweep.points[0].z.p, sweep.points[2].z.p);
  EXPECT_LT(sweep.points[0].x.p, sweep.points[2].x.p);
  EXPECT_GT(sweep.eta_opt, 0.25);
  EXPECT_LT(sweep.eta_opt, 1.0);
  EXPECT_GT(sweep.eta_star, 0.5);
  EXPECT_LT(sweep.eta_star, 1.0);
}

}  // namespace
}  // namespace compass
