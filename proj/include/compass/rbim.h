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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "compass/coloring.h"
#include "compass/compass_code.h"
#include "compass/harness.h"
#include "compass/threshold.h"

namespace compass {

/// Two-body Ising model attached to a coloring's Z errors. Spins are the
/// generators of the Z-type gauge group: for every column pair (j, j + 1)
/// the rows split into runs joined across Blue cells, and each run is one
/// generator. Bond q belongs to qubit q and couples the (at most two)
/// generators supported on it. On planar lattices the outermost columns
/// have a single generator; their bonds couple to the ghost spin, index
/// num_spins, which is frozen at +1.
struct RbimLattice {
  static constexpr std::uint32_t kNoSpin = UINT32_MAX;

  std::size_t L = 0;
  Topology topology = Topology::kPlanar;
  std::size_t num_spins = 0;
  /// Per bond: the coupled spins; a == b == kNoSpin for a bond on no
  /// generator at all.
  std::vector<std::array<std::uint32_t, 2>> bonds;
  /// Qubit support of every spin's generator (empty for hand-built models).
  std::vector<QubitSupport> generators;

  std::uint32_t ghost() const noexcept { return static_cast<std::uint32_t>(num_spins); }
  bool has_ghost() const noexcept;
  std::size_t num_bonds() const noexcept { return bonds.size(); }
};

RbimLattice build_rbim_lattice(const Coloring& coloring);

/// beta = ln((1 - p) / p) / 2. Requires 0 < p < 1.
double nishimori_beta(double p);

/// A lattice with quenched disorder: tau[q] = -1 iff qubit q carries a Z
/// error.
struct RbimInstance {
  std::shared_ptr<const RbimLattice> lattice;
  std::vector<std::int8_t> tau;
  double p = 0.0;
  double beta = 0.0;
};

/// Draws tau iid with P(tau = -1) = p and sets beta on the Nishimori line.
/// Requires 0 < p < 1/2.
RbimInstance build_rbim(const Coloring& coloring, double p, std::mt19937_64& rng);
RbimInstance build_rbim(std::shared_ptr<const RbimLattice> lattice, double p,
                        std::mt19937_64& rng);

/// Spin configuration with num_spins + 1 entries; the last is the ghost.
using Spins = std::vector<std::int8_t>;
Spins ordered_spins(const RbimLattice& lattice);

/// H = -sum_q tau_q s_a s_b, with missing partners read as +1.
double energy(const RbimInstance& instance, std::span<const std::int8_t> spins);

/// Energy change from flipping spin v.
double flip_delta(const RbimInstance& instance, std::span<const std::int8_t> spins,
                  std::uint32_t v);

/// Cluster-averaged magnetization moments of one configuration.
struct MomentSample {
  double m2 = 0.0;
  double m4 = 0.0;
};

/// Swendsen-Wang with +-J bonds: satisfied bonds are frozen with
/// probability 1 - exp(-2 beta) and every cluster not holding the ghost
/// flips with probability 1/2. Returns the improved estimators of m^2 and
/// m^4 (m = sum of spins over num_spins, plus the ghost when present, per
/// spin) for the bond configuration drawn.
class ClusterUpdater {
 public:
  explicit ClusterUpdater(const RbimInstance& instance);
  MomentSample sweep(Spins& spins, std::mt19937_64& rng);

  /// One Metropolis pass over the free spins in index order.
  void metropolis_sweep(Spins& spins, std::mt19937_64& rng);

  /// A cluster sweep followed by `local_sweeps` Metropolis passes; returns
  /// the cluster sweep's estimators. Frozen clusters span almost the whole
  /// lattice at low temperature with frustration, so the cluster move alone
  /// relaxes very slowly there.
  MomentSample step(Spins& spins, std::mt19937_64& rng, std::size_t local_sweeps);

 private:
  std::uint32_t find(std::uint32_t v);

  const RbimInstance& instance_;
  double freeze_ = 0.0;
  bool ghost_ = false;
  std::vector<std::uint32_t> parent_;
  std::vector<double> cluster_sum_;
  std::vector<std::uint8_t> flip_;
  // Per free spin: (neighbor, tau) pairs, neighbor kNoSpin for a bond to
  // nothing; CSR layout.
  std::vector<std::uint32_t> offsets_;
  std::vector<std::pair<std::uint32_t, std::int8_t>> neighbors_;
  // accept_[k]: acceptance of an energy increase 2k.
  std::vector<double> accept_;
};

struct EstimatorSeries {
  std::vector<double> m2;
  std::vector<double> m4;
};

struct BinderEstimate {
  double U = kUnset;
  double U_err = kUnset;
  /// Integrated autocorrelation time of m^2 from the binning plateau.
  double tau_int = kUnset;
  /// False when the binned error was still growing at the largest bin.
  bool converged = false;
  std::size_t bin_levels = 0;
};

/// U = 1 - <m^4> / (3 <m^2>^2) with a binning-analysis error bar.
BinderEstimate binder_cumulant(const EstimatorSeries& series);

struct RbimConfig {
  CodeFamily family = CodeFamily::kSurfaceDensity;
  Topology topology = Topology::kPlanar;
  double q_surf = kUnset;
  double q_shor = kUnset;
  std::size_t ell = 0;
  std::size_t L = 0;
  double p = kUnset;
  /// Disorder realizations.
  std::size_t samples = 0;
  /// Measured sweeps per realization, after `thermalization` discarded ones.
  std::size_t sweeps = 0;
  std::size_t thermalization = 0;
  /// Metropolis passes after every cluster sweep.
  std::size_t local_sweeps = 1;
  std::uint64_t master_seed = 1;
  unsigned workers = 0;
};

void validate(const RbimConfig& config);

/// Thermal averages for one disorder realization.
struct Realization {
  double m2 = 0.0;
  double m4 = 0.0;
  double tau_int = 0.0;
  bool converged = false;
};

struct RbimPoint {
  RbimConfig config;
  std::vector<Realization> realizations;
  /// 1 - [<m^4>] / (3 [<m^2>]^2), brackets averaging over disorder.
  double U = kUnset;
  /// Jackknife over realizations.
  double U_err = kUnset;
  double tau_int = kUnset;
  double converged_fraction = 0.0;
};

/// Coloring of one disorder realization (random families draw from rng).
Coloring rbim_coloring(const RbimConfig& config, std::mt19937_64& rng);

RbimPoint run_rbim_point(const RbimConfig& config);

/// Disorder-averaged Binder cumulant from stored realizations.
void summarize(RbimPoint& point);

struct CriticalScan {
  /// L, p replaced per point.
  RbimConfig base;
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
  std::size_t bootstrap = 500;
};

struct CriticalEstimate {
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
  /// Size-major: points[s * p_grid.size() + k].
  std::vector<RbimPoint> points;
  /// Where the two largest sizes' U curves cross; interval from resampling
  /// disorder realizations.
  Crossing crossing;
};

using RbimCallback = std::function<void(const RbimPoint&)>;

CriticalEstimate find_critical(const CriticalScan& scan, const RbimCallback& on_point = {});

/// Crossing plus bootstrap interval from already simulated points.
Crossing binder_crossing(std::span<const RbimPoint> smaller, std::span<const RbimPoint> larger,
                         std::size_t resamples, std::uint64_t seed);

std::string rbim_csv_header();
std::string rbim_csv_row(const RbimPoint& point);

/// Critical point against plaquette density: columns q, p_c and ci, the
/// half width of the crossing interval.
std::string density_csv_header();
std::string density_csv_row(double q, const Crossing& crossing);

}  // namespace compass
