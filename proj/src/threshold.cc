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

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace compass {

std::string_view to_string(FailureMetric metric) {
  switch (metric) {
    case FailureMetric::kAny:
      return "any";
    case FailureMetric::kZ:
      return "z";
    case FailureMetric::kX:
      return "x";
  }
  return "?";
}

FailureMetric parse_metric(std::string_view text) {
  if (text == "any") return FailureMetric::kAny;
  if (text == "z") return FailureMetric::kZ;
  if (text == "x") return FailureMetric::kX;
  throw std::invalid_argument("unknown failure metric '" + std::string(text) + "'");
}

std::uint64_t failures(const TrialBatch& b, FailureMetric metric) {
  switch (metric) {
    case FailureMetric::kZ:
      return b.fail_z;
    case FailureMetric::kX:
      return b.fail_x;
    case FailureMetric::kAny:
      break;
  }
  return b.fail_any;
}

namespace {

void check_curves(std::span<const CurvePoint> a, std::span<const CurvePoint> b) {
  if (a.size() != b.size()) throw std::invalid_argument("curves sampled on different grids");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].p != b[k].p) throw std::invalid_argument("curves sampled on different grids");
    if (k > 0 && !(a[k].p > a[k - 1].p)) throw std::invalid_argument("p grid must increase");
  }
}

// Indices of the second largest and the largest size.
std::pair<std::size_t, std::size_t> two_largest(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> idx(sizes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });
  return {idx[idx.size() - 2], idx.back()};
}

double variance(const CurvePoint& c) {
  double n = static_cast<double>(std::max<std::uint64_t>(c.trials, 1));
  double r = c.rate();
  return std::max(r * (1.0 - r), 1.0 / n) / n;
}

}  // namespace

Crossing crossing_from_differences(std::span<const double> p, std::span<const double> d,
                                  std::span<const double> sd) {
  const std::size_t n = p.size();
  if (d.size() != n || sd.size() != n) {
    throw std::invalid_argument("difference curve and grid differ in length");
  }
  Crossing out;
  if (n < 2) return out;
  // Candidate intervals (c, j): d[c] < 0, d[j] > 0, zeros in between. Keep
  // the one most consistent with "negative before, positive after".
  std::size_t best = n, best_next = n;
  double best_cost = 0.0;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    if (!(d[c] < 0.0)) continue;
    std::size_t j = c + 1;
    while (j < n && d[j] == 0.0) ++j;
    if (j == n || !(d[j] > 0.0)) continue;
    double cost = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double z = d[k] / sd[k];
      cost += k <= c ? std::max(0.0, z) : std::max(0.0, -z);
    }
    if (best == n || cost < best_cost) {
      best = c;
      best_next = j;
      best_cost = cost;
    }
  }
  if (best == n) return out;

  std::size_t lo = best > 0 ? best - 1 : 0;
  std::size_t hi = std::min(n - 1, best_next + 1);
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double center = 0.5 * (p[best] + p[best_next]);
  for (std::size_t k = lo; k <= hi; ++k) {
    double w = 1.0 / (sd[k] * sd[k]);
    double x = p[k] - center;
    sw += w;
    sx += w * x;
    sy += w * d[k];
    sxx += w * x * x;
    sxy += w * x * d[k];
  }
  double det = sw * sxx - sx * sx;
  double root = kUnset;
  if (det > 0.0) {
    double slope = (sw * sxy - sx * sy) / det;
    double icpt = (sy - slope * sx) / sw;
    if (slope > 0.0) root = center - icpt / slope;
  }
  // A fit dragged outside its own window by a noisy neighbor falls back to
  // interpolating across the sign change.
  if (!(root >= p[lo] && root <= p[hi])) {
    double t = -d[best] / (d[best_next] - d[best]);
    root = p[best] + t * (p[best_next] - p[best]);
  }
  out.found = true;
  out.p = root;
  return out;
}

Crossing locate_crossing(std::span<const CurvePoint> smaller, std::span<const CurvePoint> larger) {
  check_curves(smaller, larger);
  const std::size_t n = smaller.size();
  std::vector<double> p(n), d(n), sd(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = smaller[k].p;
    d[k] = larger[k].rate() - smaller[k].rate();
    sd[k] = std::sqrt(variance(larger[k]) + variance(smaller[k]));
  }
  return crossing_from_differences(p, d, sd);
}

Crossing bootstrap_crossing(std::span<const CurvePoint> smaller,
                            std::span<const CurvePoint> larger, std::size_t resamples,
                            std::uint64_t seed) {
  Crossing out = locate_crossing(smaller, larger);
  out.resamples = resamples;
  if (!out.found || resamples == 0) return out;
  std::mt19937_64 rng(seed);
  std::vector<CurvePoint> a(smaller.begin(), smaller.end());
  std::vector<CurvePoint> b(larger.begin(), larger.end());
  auto redraw = [&rng](std::span<const CurvePoint> src, std::vector<CurvePoint>& dst) {
    for (std::size_t k = 0; k < src.size(); ++k) {
      std::binomial_distribution<std::uint64_t> draw(src[k].trials, src[k].rate());
      dst[k].failures = draw(rng);
    }
  };
  std::vector<double> roots;
  roots.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    redraw(smaller, a);
    redraw(larger, b);
    Crossing c = locate_crossing(a, b);
    if (c.found) roots.push_back(c.p);
  }
  out.resamples_found = roots.size();
  if (roots.empty()) return out;
  std::sort(roots.begin(), roots.end());
  auto quantile = [&roots](double q) {
    double pos = q * static_cast<double>(roots.size() - 1);
    auto i = static_cast<std::size_t>(pos);
    double f = pos - static_cast<double>(i);
    return i + 1 < roots.size() ? roots[i] * (1 - f) + roots[i + 1] * f : roots[i];
  };
  out.ci_low = quantile(0.025);
  out.ci_high = quantile(0.975);
  return out;
}

double pseudothreshold(std::span<const CurvePoint> curve) {
  for (std::size_t k = 0; k < curve.size(); ++k) {
    double g = curve[k].rate() - curve[k].p;
    if (g < 0.0) continue;
    if (k == 0) return kUnset;
    double g0 = curve[k - 1].rate() - curve[k - 1].p;
    double t = g0 / (g0 - g);
    return curve[k - 1].p + t * (curve[k].p - curve[k - 1].p);
  }
  return kUnset;
}

std::vector<CurvePoint> ThresholdEstimate::curve(std::size_t s, FailureMetric m) const {
  std::vector<CurvePoint> out;
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    const TrialBatch& b = batches.at(s * p_grid.size() + k);
    out.push_back({p_grid[k], b.trials, failures(b, m)});
  }
  return out;
}

ThresholdEstimate analyze_threshold(std::vector<TrialBatch> batches,
                                    std::vector<std::size_t> sizes, std::vector<double> p_grid,
                                    FailureMetric metric, std::size_t bootstrap,
                                    std::uint64_t seed) {
  if (batches.size() != sizes.size() * p_grid.size()) {
    throw std::invalid_argument("batch count does not match sizes x p grid");
  }
  ThresholdEstimate est;
  est.metric = metric;
  est.sizes = std::move(sizes);
  est.p_grid = std::move(p_grid);
  est.batches = std::move(batches);
  for (std::size_t s = 0; s < est.sizes.size(); ++s) {
    est.pseudothresholds.push_back(pseudothreshold(est.curve(s, metric)));
  }
  if (est.sizes.size() >= 2) {
    auto [second, big] = two_largest(est.sizes);
    auto small = est.curve(second, metric);
    auto large = est.curve(big, metric);
    est.crossing = bootstrap_crossing(small, large, bootstrap, seed);
  }
  return est;
}

ThresholdEstimate estimate_threshold(const ThresholdConfig& config, const BatchCallback& on_batch) {
  if (config.sizes.size() < 2) throw std::invalid_argument("threshold needs at least two sizes");
  if (config.p_grid.size() < 2) throw std::invalid_argument("threshold needs at least two p values");
  if (config.trials == 0) throw std::invalid_argument("trials must be positive");
  std::vector<TrialBatch> batches;
  for (std::size_t L : config.sizes) {
    for (double p : config.p_grid) {
      BatchConfig c = config.base;
      c.L = L;
      c.p = p;
      c.trials = config.trials;
      if (config.rounds_equal_L) c.rounds = L;
      batches.push_back(run_batch(c));
      if (on_batch) on_batch(batches.back());
    }
  }
  return analyze_threshold(std::move(batches), config.sizes, config.p_grid, config.metric,
                           config.bootstrap, config.base.master_seed);
}

Confirmation confirm_threshold(const BatchConfig& base, std::size_t L, double p_below,
                               double p_above, std::uint64_t trials, FailureMetric metric) {
  Confirmation out;
  BatchConfig c = base;
  c.L = L;
  c.trials = trials;
  c.p = p_below;
  out.below = run_batch(c);
  c.p = p_above;
  out.above = run_batch(c);
  auto below = wilson_interval(failures(out.below, metric), trials);
  auto above = wilson_interval(failures(out.above, metric), trials);
  double saturated = metric == FailureMetric::kAny && base.decode_z && base.decode_x ? 0.75 : 0.5;
  out.below_near_zero = below.high < 0.05;
  out.above_saturated = above.high >= saturated - 0.05;
  return out;
}

namespace {

// Linear interpolation of the first sign change of f from negative to
// non-negative; unset if there is none.
double first_root(const std::vector<double>& x, const std::vector<double>& f) {
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::isnan(f[k - 1]) || std::isnan(f[k])) continue;
    if (f[k - 1] < 0.0 && f[k] >= 0.0) {
      double t = f[k - 1] / (f[k - 1] - f[k]);
      return x[k - 1] + t * (x[k] - x[k - 1]);
    }
  }
  return kUnset;
}

}  // namespace

BiasSweep sweep_bias(const ThresholdConfig& config, std::span<const double> etas,
                     std::span<const double> baseline, const BatchCallback& on_batch) {
  if (!baseline.empty() && baseline.size() != etas.size()) {
    throw std::invalid_argument("baseline needs one threshold per eta");
  }
  BiasSweep out;
  for (double eta : etas) {
    ThresholdConfig c = config;
    c.base.eta = eta;
    c.base.noise = NoiseKind::kBiased;
    BiasPoint pt;
    pt.eta = eta;
    pt.estimate = estimate_threshold(c, on_batch);
    const auto& est = pt.estimate;
    auto [second, big] = two_largest(est.sizes);
    pt.z = locate_crossing(est.curve(second, FailureMetric::kZ), est.curve(big, FailureMetric::kZ));
    pt.x = locate_crossing(est.curve(second, FailureMetric::kX), est.curve(big, FailureMetric::kX));
    out.points.push_back(std::move(pt));
  }

  std::vector<double> x, gap, thr;
  for (const auto& pt : out.points) {
    x.push_back(pt.eta);
    gap.push_back(pt.z.found && pt.x.found ? pt.x.p - pt.z.p : kUnset);
    thr.push_back(pt.estimate.crossing.found ? pt.estimate.crossing.p : kUnset);
  }
  // Z crossing falls and X crossing rises with eta; they meet at the optimum.
  double meet = first_root(x, gap);
  if (!std::isnan(meet)) {
    out.eta_opt = meet;
    for (std::size_t k = 1; k < x.size(); ++k) {
      if (x[k - 1] <= meet && meet <= x[k]) {
        double t = (meet - x[k - 1]) / (x[k] - x[k - 1]);
        auto zp = [&](std::size_t i) { return out.points[i].z.p; };
        out.p_opt = zp(k - 1) + t * (zp(k) - zp(k - 1));
        break;
      }
    }
  } else {
    for (std::size_t k = 0; k < thr.size(); ++k) {
      if (!std::isnan(thr[k]) && (std::isnan(out.p_opt) || thr[k] > out.p_opt)) {
        out.p_opt = thr[k];
        out.eta_opt = x[k];
      }
    }
  }
  if (!baseline.empty()) {
    std::vector<double> lead(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) lead[k] = thr[k] - baseline[k];
    out.eta_star = first_root(x, lead);
  }
  return out;
}

BiasOptimum optimal_bias(double q_z_threshold, double q_x_threshold) {
  if (!(q_z_threshold > 0.0 && q_x_threshold > 0.0)) {
    throw std::invalid_argument("per-species thresholds must be positive");
  }
  BiasOptimum out;
  out.eta_opt = std::max(0.0, q_z_threshold / q_x_threshold - 0.5);
  out.p_thr = threshold_at_bias(q_z_threshold, q_x_threshold, out.eta_opt);
  return out;
}

double threshold_at_bias(double q_z_threshold, double q_x_threshold, double eta) {
  if (std::isinf(eta)) return q_z_threshold;
  double z_limit = q_z_threshold * (1.0 + eta) / (eta + 0.5);
  double x_limit = q_x_threshold * (1.0 + eta);
  return std::min(z_limit, x_limit);
}

}  // namespace compass
