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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "compass/harness.h"

namespace compass {

/// Which failure count defines the logical rate of a batch.
enum class FailureMetric : std::uint8_t { kAny, kZ, kX };

std::string_view to_string(FailureMetric metric);
FailureMetric parse_metric(std::string_view text);
std::uint64_t failures(const TrialBatch& batch, FailureMetric metric);

struct CurvePoint {
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double rate() const noexcept {
    return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
  }
};

struct Crossing {
  bool found = false;
  double p = kUnset;
  /// Percentile interval over binomial resamples (unset without bootstrap).
  double ci_low = kUnset;
  double ci_high = kUnset;
  std::size_t resamples = 0;
  std::size_t resamples_found = 0;
};

/// Crossing of two logical-rate curves sampled on the same p grid: the
/// larger lattice must go from below to above the smaller one. A weighted
/// line through the rate difference at the four grid points around the
/// sign change gives the estimate, or plain interpolation across the sign
/// change when the fitted root leaves those points. No sign change means
/// no crossing.
Crossing locate_crossing(std::span<const CurvePoint> smaller, std::span<const CurvePoint> larger);

/// Root of a noisy difference curve d(p) with standard errors sd, taken
/// where d goes from negative to positive; the shared core of every
/// crossing estimate.
Crossing crossing_from_differences(std::span<const double> p, std::span<const double> d,
                                  std::span<const double> sd);

/// locate_crossing plus a percentile interval from `resamples` parametric
/// binomial resamples of every point.
Crossing bootstrap_crossing(std::span<const CurvePoint> smaller,
                            std::span<const CurvePoint> larger, std::size_t resamples,
                            std::uint64_t seed);

/// p where the logical rate first reaches the physical rate p (linear
/// interpolation), or unset if it never does on the grid.
double pseudothreshold(std::span<const CurvePoint> curve);

struct ThresholdConfig {
  /// L, p and trials are replaced per point.
  BatchConfig base;
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
  std::uint64_t trials = 0;
  FailureMetric metric = FailureMetric::kAny;
  /// Phenomenological runs with rounds = L.
  bool rounds_equal_L = false;
  std::size_t bootstrap = 1000;
};

struct ThresholdEstimate {
  FailureMetric metric = FailureMetric::kAny;
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
  /// Size-major: batches[s * p_grid.size() + k].
  std::vector<TrialBatch> batches;
  /// Between the two largest sizes.
  Crossing crossing;
  std::vector<double> pseudothresholds;

  std::vector<CurvePoint> curve(std::size_t size_index, FailureMetric m) const;
};

using BatchCallback = std::function<void(const TrialBatch&)>;

ThresholdEstimate estimate_threshold(const ThresholdConfig& config,
                                     const BatchCallback& on_batch = {});

/// Re-derives crossing and pseudothresholds from stored batches.
ThresholdEstimate analyze_threshold(std::vector<TrialBatch> batches,
                                    std::vector<std::size_t> sizes, std::vector<double> p_grid,
                                    FailureMetric metric, std::size_t bootstrap,
                                    std::uint64_t seed);

/// Large-lattice check on both sides of a crossing.
struct Confirmation {
  TrialBatch below;
  TrialBatch above;
  /// Wilson upper bound below 5%.
  bool below_near_zero = false;
  /// Wilson upper bound within 5% of the saturated rate (1/2 for one error
  /// species, 3/4 for either).
  bool above_saturated = false;
};
Confirmation confirm_threshold(const BatchConfig& base, std::size_t L, double p_below,
                               double p_above, std::uint64_t trials, FailureMetric metric);

struct BiasPoint {
  double eta = 0.0;
  ThresholdEstimate estimate;
  Crossing z;
  Crossing x;
};

struct BiasSweep {
  std::vector<BiasPoint> points;
  /// Where the Z and X crossings meet (interpolated), else the grid argmax
  /// of the either-failure crossing.
  double eta_opt = kUnset;
  double p_opt = kUnset;
  /// First eta where the threshold overtakes the baseline (interpolated).
  double eta_star = kUnset;
};

/// One threshold estimate per eta, all on config.p_grid. `baseline` holds
/// the reference code's threshold at each eta (may be empty).
BiasSweep sweep_bias(const ThresholdConfig& config, std::span<const double> etas,
                     std::span<const double> baseline = {}, const BatchCallback& on_batch = {});

/// Total-p threshold and optimal bias implied by per-species effective
/// thresholds: eta_opt = q_z / q_x - 1/2 and p = q_x (1 + eta_opt).
struct BiasOptimum {
  double eta_opt = 0.0;
  double p_thr = 0.0;
};
BiasOptimum optimal_bias(double q_z_threshold, double q_x_threshold);

/// Total-p threshold at bias eta limited by whichever species fails first.
double threshold_at_bias(double q_z_threshold, double q_x_threshold, double eta);

}  // namespace compass
