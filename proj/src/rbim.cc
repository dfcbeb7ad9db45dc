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

#include "compass/rbim.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace compass {

bool RbimLattice::has_ghost() const noexcept {
  for (const auto& b : bonds) {
    if (b[0] == ghost() || b[1] == ghost()) return true;
  }
  return false;
}

RbimLattice build_rbim_lattice(const Coloring& coloring) {
  const std::size_t L = coloring.L();
  const bool toric = coloring.topology() == Topology::kToric;
  if (L < 2) throw std::invalid_argument("spin model needs L >= 2");
  RbimLattice lat;
  lat.L = L;
  lat.topology = coloring.topology();
  const std::size_t gaps = toric ? L : L - 1;
  const std::size_t joins = toric ? L : L - 1;

  // spin_of[g * L + i]: generator holding row i of column pair g.
  std::vector<std::uint32_t> spin_of(gaps * L);
  std::vector<std::uint32_t> row_parent(L);
  auto find = [&](std::uint32_t v) {
    while (row_parent[v] != v) v = row_parent[v] = row_parent[row_parent[v]];
    return v;
  };
  for (std::size_t g = 0; g < gaps; ++g) {
    std::iota(row_parent.begin(), row_parent.end(), 0u);
    for (std::size_t i = 0; i < joins; ++i) {
      if (coloring.at(i, g) != Plaquette::kBlue) continue;
      std::uint32_t a = find(static_cast<std::uint32_t>(i));
      std::uint32_t b = find(static_cast<std::uint32_t>((i + 1) % L));
      if (a != b) row_parent[b] = a;
    }
    std::vector<std::uint32_t> id(L, RbimLattice::kNoSpin);
    for (std::size_t i = 0; i < L; ++i) {
      std::uint32_t r = find(static_cast<std::uint32_t>(i));
      if (id[r] == RbimLattice::kNoSpin) {
        id[r] = static_cast<std::uint32_t>(lat.generators.size());
        lat.generators.emplace_back();
      }
      spin_of[g * L + i] = id[r];
      auto& support = lat.generators[id[r]];
      support.push_back(static_cast<std::uint32_t>(i * L + g));
      support.push_back(static_cast<std::uint32_t>(i * L + (g + 1) % L));
    }
  }
  for (auto& s : lat.generators) std::sort(s.begin(), s.end());
  lat.num_spins = lat.generators.size();

  lat.bonds.resize(L * L);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t c = 0; c < L; ++c) {
      std::uint32_t left = RbimLattice::kNoSpin;
      std::uint32_t right = RbimLattice::kNoSpin;
      if (toric) {
        left = spin_of[((c + L - 1) % L) * L + i];
        right = spin_of[c * L + i];
      } else {
        if (c > 0) left = spin_of[(c - 1) * L + i];
        if (c + 1 < L) right = spin_of[c * L + i];
        if (left == RbimLattice::kNoSpin) left = lat.ghost();
        if (right == RbimLattice::kNoSpin) right = lat.ghost();
      }
      lat.bonds[i * L + c] = {left, right};
    }
  }
  return lat;
}

double nishimori_beta(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Nishimori beta needs 0 < p < 1");
  return 0.5 * (std::log1p(-p) - std::log(p));
}

RbimInstance build_rbim(std::shared_ptr<const RbimLattice> lattice, double p,
                        std::mt19937_64& rng) {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("disorder p must lie in (0, 1/2)");
  RbimInstance inst;
  inst.tau.resize(lattice->num_bonds());
  std::bernoulli_distribution flip(p);
  for (auto& t : inst.tau) t = flip(rng) ? -1 : 1;
  inst.lattice = std::move(lattice);
  inst.p = p;
  inst.beta = nishimori_beta(p);
  return inst;
}

RbimInstance build_rbim(const Coloring& coloring, double p, std::mt19937_64& rng) {
  return build_rbim(std::make_shared<const RbimLattice>(build_rbim_lattice(coloring)), p, rng);
}

Spins ordered_spins(const RbimLattice& lattice) { return Spins(lattice.num_spins + 1, 1); }

namespace {

int spin_value(std::span<const std::int8_t> spins, std::uint32_t v) {
  return v == RbimLattice::kNoSpin ? 1 : spins[v];
}

void check_spins(const RbimInstance& inst, std::span<const std::int8_t> spins) {
  if (spins.size() != inst.lattice->num_spins + 1) {
    throw std::invalid_argument("spin vector must hold num_spins + 1 entries");
  }
}

}  // namespace

double energy(const RbimInstance& inst, std::span<const std::int8_t> spins) {
  check_spins(inst, spins);
  double e = 0.0;
  const auto& bonds = inst.lattice->bonds;
  for (std::size_t q = 0; q < bonds.size(); ++q) {
    e -= inst.tau[q] * spin_value(spins, bonds[q][0]) * spin_value(spins, bonds[q][1]);
  }
  return e;
}

double flip_delta(const RbimInstance& inst, std::span<const std::int8_t> spins,
                  std::uint32_t v) {
  check_spins(inst, spins);
  double field = 0.0;
  const auto& bonds = inst.lattice->bonds;
  for (std::size_t q = 0; q < bonds.size(); ++q) {
    auto [a, b] = bonds[q];
    if ((a == v) == (b == v)) continue;
    field += inst.tau[q] * spin_value(spins, a) * spin_value(spins, b);
  }
  return 2.0 * field;
}

ClusterUpdater::ClusterUpdater(const RbimInstance& instance)
    : instance_(instance),
      freeze_(-std::expm1(-2.0 * instance.beta)),
      ghost_(instance.lattice->has_ghost()),
      parent_(instance.lattice->num_spins + 1),
      cluster_sum_(instance.lattice->num_spins + 1),
      flip_(instance.lattice->num_spins + 1) {
  const RbimLattice& lat = *instance.lattice;
  const std::size_t n = lat.num_spins;
  offsets_.assign(n + 1, 0);
  auto for_each_end = [&](auto&& visit) {
    for (std::size_t q = 0; q < lat.bonds.size(); ++q) {
      auto [a, b] = lat.bonds[q];
      if (a == b) continue;
      if (a < n) visit(a, b == lat.ghost() ? RbimLattice::kNoSpin : b, instance.tau[q]);
      if (b < n) visit(b, a == lat.ghost() ? RbimLattice::kNoSpin : a, instance.tau[q]);
    }
  };
  for_each_end([&](std::uint32_t v, std::uint32_t, std::int8_t) { ++offsets_[v + 1]; });
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  neighbors_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  std::size_t max_degree = 0;
  for_each_end([&](std::uint32_t v, std::uint32_t w, std::int8_t t) {
    neighbors_[fill[v]++] = {w, t};
  });
  for (std::size_t v = 0; v < n; ++v) {
    max_degree = std::max<std::size_t>(max_degree, offsets_[v + 1] - offsets_[v]);
  }
  accept_.resize(max_degree + 1);
  for (std::size_t k = 0; k <= max_degree; ++k) {
    accept_[k] = std::exp(-2.0 * instance.beta * static_cast<double>(k));
  }
}

void ClusterUpdater::metropolis_sweep(Spins& spins, std::mt19937_64& rng) {
  constexpr double kUnit = 1.0 / 9007199254740992.0;
  const std::size_t n = instance_.lattice->num_spins;
  for (std::size_t v = 0; v < n; ++v) {
    int field = 0;
    for (std::uint32_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
      auto [w, t] = neighbors_[k];
      field += t * (w == RbimLattice::kNoSpin ? 1 : spins[w]);
    }
    // Energy change 2 s f, in units of 2.
    int up = spins[v] * field;
    if (up <= 0 || static_cast<double>(rng() >> 11) * kUnit < accept_[up]) {
      spins[v] = static_cast<std::int8_t>(-spins[v]);
    }
  }
}

MomentSample ClusterUpdater::step(Spins& spins, std::mt19937_64& rng, std::size_t local_sweeps) {
  MomentSample m = sweep(spins, rng);
  for (std::size_t k = 0; k < local_sweeps; ++k) metropolis_sweep(spins, rng);
  return m;
}

std::uint32_t ClusterUpdater::find(std::uint32_t v) {
  while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
  return v;
}

MomentSample ClusterUpdater::sweep(Spins& spins, std::mt19937_64& rng) {
  const RbimLattice& lat = *instance_.lattice;
  const std::uint32_t n = static_cast<std::uint32_t>(lat.num_spins);
  const std::uint32_t ghost = lat.ghost();
  std::iota(parent_.begin(), parent_.end(), 0u);
  constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
  for (std::size_t q = 0; q < lat.bonds.size(); ++q) {
    auto [a, b] = lat.bonds[q];
    if (a == RbimLattice::kNoSpin || b == RbimLattice::kNoSpin || a == b) continue;
    if (instance_.tau[q] * spins[a] * spins[b] != 1) continue;
    if (static_cast<double>(rng() >> 11) * kUnit >= freeze_) continue;
    std::uint32_t ra = find(a), rb = find(b);
    if (ra == rb) continue;
    if (ra == ghost) std::swap(ra, rb);
    parent_[ra] = rb;  // the ghost stays a root
  }
  std::fill(cluster_sum_.begin(), cluster_sum_.end(), 0.0);
  for (std::uint32_t v = 0; v < n; ++v) cluster_sum_[find(v)] += spins[v];
  if (ghost_) cluster_sum_[ghost] += 1.0;

  double a = ghost_ ? cluster_sum_[ghost] : 0.0;
  double s2 = 0.0, s4 = 0.0;
  std::uint64_t bits = 0;
  int left = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (parent_[v] != v) continue;
    double m = cluster_sum_[v];
    s2 += m * m;
    s4 += m * m * m * m;
    if (left == 0) {
      bits = rng();
      left = 64;
    }
    flip_[v] = bits & 1u;
    bits >>= 1;
    --left;
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t r = find(v);
    if (r != ghost && flip_[r]) spins[v] = static_cast<std::int8_t>(-spins[v]);
  }
  const double N = static_cast<double>(n) + (ghost_ ? 1.0 : 0.0);
  const double N2 = N * N;
  MomentSample out;
  out.m2 = (a * a + s2) / N2;
  out.m4 = (a * a * a * a + 6.0 * a * a * s2 + 3.0 * s2 * s2 - 2.0 * s4) / (N2 * N2);
  return out;
}

namespace {

double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double binder(double m2, double m4) { return 1.0 - m4 / (3.0 * m2 * m2); }

// Jackknife error of U over equal-weight blocks.
double jackknife_binder(std::span<const double> m2, std::span<const double> m4) {
  const std::size_t n = m2.size();
  if (n < 2) return kUnset;
  double t2 = std::accumulate(m2.begin(), m2.end(), 0.0);
  double t4 = std::accumulate(m4.begin(), m4.end(), 0.0);
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = binder((t2 - m2[k]) / double(n - 1), (t4 - m4[k]) / double(n - 1));
  }
  double ub = mean(u);
  double ss = 0.0;
  for (double x : u) ss += (x - ub) * (x - ub);
  return std::sqrt(ss * double(n - 1) / double(n));
}

double variance_of_mean(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / double(n - 1) / double(n);
}

}  // namespace

BinderEstimate binder_cumulant(const EstimatorSeries& series) {
  if (series.m2.size() != series.m4.size()) {
    throw std::invalid_argument("m2 and m4 series differ in length");
  }
  BinderEstimate out;
  if (series.m2.empty()) return out;
  out.U = binder(mean(series.m2), mean(series.m4));
  constexpr std::size_t kMinBlocks = 32;

  std::vector<double> b2 = series.m2, b4 = series.m4;
  std::vector<double> errs;
  const double var0 = variance_of_mean(b2);
  double var_last = var0;
  while (b2.size() >= kMinBlocks) {
    errs.push_back(jackknife_binder(b2, b4));
    var_last = variance_of_mean(b2);
    std::vector<double> n2(b2.size() / 2), n4(b4.size() / 2);
    for (std::size_t k = 0; k < n2.size(); ++k) {
      n2[k] = 0.5 * (b2[2 * k] + b2[2 * k + 1]);
      n4[k] = 0.5 * (b4[2 * k] + b4[2 * k + 1]);
    }
    b2.swap(n2);
    b4.swap(n4);
  }
  out.bin_levels = errs.size();
  if (errs.empty()) {
    out.U_err = jackknife_binder(series.m2, series.m4);
    return out;
  }
  const std::size_t k = errs.size();
  out.U_err = *std::max_element(errs.begin() + static_cast<std::ptrdiff_t>(k > 3 ? k - 3 : 0),
                                errs.end());
  out.tau_int = var0 > 0.0 ? 0.5 * var_last / var0 : 0.5;
  if (k >= 3) {
    constexpr double kGrowth = 1.2;
    out.converged = errs[k - 1] <= kGrowth * errs[k - 2] && errs[k - 1] <= kGrowth * errs[k - 3];
  }
  return out;
}

void validate(const RbimConfig& c) {
  auto probability = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
  };
  switch (c.family) {
    case CodeFamily::kSurfaceDensity:
      probability(c.q_surf, "q_surf");
      break;
    case CodeFamily::kShorDensity:
      probability(c.q_shor, "q_shor");
      break;
    case CodeFamily::kElongated:
      if (c.ell == 0) throw std::invalid_argument("ell must be positive");
      break;
    case CodeFamily::kTailored:
      throw std::invalid_argument("spin models are not built for tailored codes");
  }
  if (c.L < 2) throw std::invalid_argument("spin model needs L >= 2");
  if (!(c.p > 0.0 && c.p < 0.5)) throw std::invalid_argument("disorder p must lie in (0, 1/2)");
  if (c.samples == 0) throw std::invalid_argument("samples must be positive");
  if (c.sweeps == 0) throw std::invalid_argument("sweeps must be positive");
}

Coloring rbim_coloring(const RbimConfig& c, std::mt19937_64& rng) {
  switch (c.family) {
    case CodeFamily::kSurfaceDensity:
      return surface_density_coloring(c.L, c.q_surf, rng, c.topology);
    case CodeFamily::kShorDensity:
      return shor_density_coloring(c.L, c.q_shor, rng, c.topology);
    case CodeFamily::kElongated:
      return elongated_coloring(c.L, c.ell, c.topology);
    case CodeFamily::kTailored:
      break;
  }
  throw std::invalid_argument("spin models are not built for tailored codes");
}

void summarize(RbimPoint& point) {
  const auto& rs = point.realizations;
  if (rs.empty()) return;
  std::vector<double> m2(rs.size()), m4(rs.size());
  double tau = 0.0, conv = 0.0;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    m2[k] = rs[k].m2;
    m4[k] = rs[k].m4;
    tau += rs[k].tau_int;
    conv += rs[k].converged ? 1.0 : 0.0;
  }
  point.U = binder(mean(m2), mean(m4));
  point.U_err = rs.size() > 1 ? jackknife_binder(m2, m4) : kUnset;
  point.tau_int = tau / double(rs.size());
  point.converged_fraction = conv / double(rs.size());
}

RbimPoint run_rbim_point(const RbimConfig& config) {
  validate(config);
  RbimPoint point;
  point.config = config;
  point.realizations.resize(config.samples);
  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.samples);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::exception_ptr error;
  const bool random_family = config.family != CodeFamily::kElongated;
  std::shared_ptr<const RbimLattice> fixed;
  if (!random_family) {
    std::mt19937_64 unused(config.master_seed);
    fixed = std::make_shared<const RbimLattice>(build_rbim_lattice(rbim_coloring(config, unused)));
  }

  auto work = [&] {
    try {
      EstimatorSeries series;
      series.m2.resize(config.sweeps);
      series.m4.resize(config.sweeps);
      while (!stop.load(std::memory_order_relaxed)) {
        std::size_t r = next.fetch_add(1);
        if (r >= config.samples) break;
        std::mt19937_64 rng(derive_seed(config.master_seed, r));
        auto lattice = fixed;
        if (random_family) {
          lattice = std::make_shared<const RbimLattice>(
              build_rbim_lattice(rbim_coloring(config, rng)));
        }
        RbimInstance inst = build_rbim(lattice, config.p, rng);
        ClusterUpdater updater(inst);
        Spins spins = ordered_spins(*lattice);
        for (std::size_t t = 0; t < config.thermalization; ++t) {
          updater.step(spins, rng, config.local_sweeps);
        }
        for (std::size_t t = 0; t < config.sweeps; ++t) {
          MomentSample m = updater.step(spins, rng, config.local_sweeps);
          series.m2[t] = m.m2;
          series.m4[t] = m.m4;
        }
        BinderEstimate est = binder_cumulant(series);
        Realization& out = point.realizations[r];
        out.m2 = mean(series.m2);
        out.m4 = mean(series.m4);
        out.tau_int = est.tau_int;
        out.converged = est.converged;
      }
    } catch (...) {
      stop = true;
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  summarize(point);
  return point;
}

namespace {

void check_grid(std::span<const RbimPoint> a, std::span<const RbimPoint> b) {
  if (a.size() != b.size()) throw std::invalid_argument("Binder curves on different grids");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].config.p != b[k].config.p) {
      throw std::invalid_argument("Binder curves on different grids");
    }
  }
}

Crossing crossing_of(std::span<const double> p, std::span<const double> us,
                     std::span<const double> es, std::span<const double> ul,
                     std::span<const double> el) {
  const std::size_t n = p.size();
  std::vector<double> d(n), sd(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Ordered side: the larger lattice has the larger U.
    d[k] = us[k] - ul[k];
    double v = (std::isnan(es[k]) ? 0.0 : es[k] * es[k]) + (std::isnan(el[k]) ? 0.0 : el[k] * el[k]);
    sd[k] = std::sqrt(std::max(v, 1e-12));
  }
  return crossing_from_differences(p, d, sd);
}

}  // namespace

Crossing binder_crossing(std::span<const RbimPoint> smaller, std::span<const RbimPoint> larger,
                         std::size_t resamples, std::uint64_t seed) {
  check_grid(smaller, larger);
  const std::size_t n = smaller.size();
  std::vector<double> p(n), us(n), es(n), ul(n), el(n);
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = smaller[k].config.p;
    us[k] = smaller[k].U;
    es[k] = smaller[k].U_err;
    ul[k] = larger[k].U;
    el[k] = larger[k].U_err;
  }
  Crossing out = crossing_of(p, us, es, ul, el);
  out.resamples = resamples;
  if (!out.found || resamples == 0) return out;

  std::mt19937_64 rng(seed);
  auto redraw = [&rng](const RbimPoint& src, double& u, double& e) {
    const auto& rs = src.realizations;
    std::uniform_int_distribution<std::size_t> pick(0, rs.size() - 1);
    RbimPoint copy;
    copy.realizations.resize(rs.size());
    for (auto& r : copy.realizations) r = rs[pick(rng)];
    summarize(copy);
    u = copy.U;
    e = copy.U_err;
  };
  std::vector<double> roots;
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      redraw(smaller[k], us[k], es[k]);
      redraw(larger[k], ul[k], el[k]);
    }
    Crossing c = crossing_of(p, us, es, ul, el);
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

CriticalEstimate find_critical(const CriticalScan& scan, const RbimCallback& on_point) {
  if (scan.sizes.size() < 2) throw std::invalid_argument("critical scan needs two sizes");
  if (scan.p_grid.size() < 2) throw std::invalid_argument("critical scan needs two p values");
  for (std::size_t k = 1; k < scan.p_grid.size(); ++k) {
    if (!(scan.p_grid[k] > scan.p_grid[k - 1])) {
      throw std::invalid_argument("p grid must increase");
    }
  }
  CriticalEstimate est;
  est.sizes = scan.sizes;
  est.p_grid = scan.p_grid;
  for (std::size_t L : scan.sizes) {
    for (double p : scan.p_grid) {
      RbimConfig c = scan.base;
      c.L = L;
      c.p = p;
      est.points.push_back(run_rbim_point(c));
      if (on_point) on_point(est.points.back());
    }
  }
  std::vector<std::size_t> idx(scan.sizes.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scan.sizes[a] < scan.sizes[b]; });
  const std::size_t m = scan.p_grid.size();
  std::span<const RbimPoint> all(est.points);
  est.crossing = binder_crossing(all.subspan(idx[idx.size() - 2] * m, m),
                                 all.subspan(idx.back() * m, m), scan.bootstrap,
                                 scan.base.master_seed);
  return est;
}

std::string rbim_csv_header() { return "q_surf,L,p,beta,samples,U,U_err,tau_int"; }

std::string rbim_csv_row(const RbimPoint& point) {
  const RbimConfig& c = point.config;
  std::string row;
  row += format_number(c.q_surf);
  row += ',' + std::to_string(c.L);
  row += ',' + format_number(c.p);
  row += ',' + format_number(nishimori_beta(c.p));
  row += ',' + std::to_string(point.realizations.size());
  row += ',' + format_number(point.U);
  row += ',' + format_number(point.U_err);
  row += ',' + format_number(point.tau_int);
  return row;
}

std::string density_csv_header() { return "q,p_c,ci"; }

std::string density_csv_row(double q, const Crossing& crossing) {
  double half = crossing.found ? (crossing.ci_high - crossing.ci_low) / 2.0 : kUnset;
  return format_number(q) + ',' + format_number(crossing.found ? crossing.p : kUnset) + ',' +
         format_number(half);
}

}  // namespace compass
