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

#include "compass/noise.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "compass/compass_code.h"

namespace compass {

BiasedChannel channel_from_bias(double p, double eta) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument("error rate p must lie in [0, 1)");
  }
  if (!(eta >= 0.0)) {
    throw std::invalid_argument("bias eta must be non-negative");
  }
  BiasedChannel ch;
  ch.p = p;
  ch.eta = eta;
  if (std::isinf(eta)) {
    ch.rates = {0.0, 0.0, p};
  } else {
    double side = p / (2.0 * (1.0 + eta));
    ch.rates = {side, side, p * eta / (1.0 + eta)};
  }
  return ch;
}

std::pair<double, double> bias_from_rates(const PauliRates& rates) {
  double p = rates.total();
  double other = rates.x + rates.y;
  double eta = other > 0.0 ? rates.z / other : std::numeric_limits<double>::infinity();
  return {p, eta};
}

double average_fidelity(const PauliRates& rates) {
  // Entanglement fidelity 1 - p; average fidelity (d F + 1) / (d + 1) with d = 2.
  return (2.0 * (1.0 - rates.total()) + 1.0) / 3.0;
}

NoiseMap::NoiseMap(std::size_t L) : L_(L), rates_(L * L) {}

void NoiseMap::set_rates(std::size_t qubit, PauliRates r) {
  if (r.x < 0 || r.y < 0 || r.z < 0 || r.x > 0.5 || r.y > 0.5 || r.z > 0.5 ||
      !(r.total() < 1.0)) {
    throw std::invalid_argument("Pauli rates of qubit " + std::to_string(qubit) +
                                " must lie in [0, 1/2] and sum below 1");
  }
  rates_.at(qubit) = r;
}

double NoiseMap::mean_total() const noexcept {
  double s = 0;
  for (const auto& r : rates_) s += r.total();
  return rates_.empty() ? 0.0 : s / static_cast<double>(rates_.size());
}

double NoiseMap::mean_z_marginal() const noexcept {
  double s = 0;
  for (const auto& r : rates_) s += r.z_marginal();
  return rates_.empty() ? 0.0 : s / static_cast<double>(rates_.size());
}

double NoiseMap::mean_x_marginal() const noexcept {
  double s = 0;
  for (const auto& r : rates_) s += r.x_marginal();
  return rates_.empty() ? 0.0 : s / static_cast<double>(rates_.size());
}

NoiseMap uniform_map(std::size_t L, const PauliRates& rates) {
  NoiseMap map(L);
  for (std::size_t q = 0; q < L * L; ++q) map.set_rates(q, rates);
  return map;
}

NoiseMap linear_profile_map(std::size_t L, double p_tot, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("incline w must lie in [0, 1]");
  }
  if (!(p_tot >= 0.0)) {
    throw std::invalid_argument("p_tot must be non-negative");
  }
  NoiseMap map(L);
  const double Ld = static_cast<double>(L);
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      double frac = static_cast<double>(j) / Ld;
      double pz = (w * frac + (1.0 - w) * (1.0 - frac)) * p_tot / 2.0;
      double px = p_tot / 2.0;
      if (pz >= 0.5 || px >= 0.5) {
        throw std::invalid_argument("linear profile produces a marginal of at least 1/2");
      }
      map.set_rates(i * L + j, {px, 0.0, pz});
    }
  }
  return map;
}

NoiseMap random_uniform_map(std::size_t L, double p, std::mt19937_64& rng) {
  if (!(p >= 0.0 && 2.0 * p < 0.5)) {
    throw std::invalid_argument("random-uniform noise needs 0 <= 2p < 1/2");
  }
  NoiseMap map(L);
  std::uniform_real_distribution<double> draw(0.0, 2.0 * p);
  for (std::size_t q = 0; q < L * L; ++q) {
    map.set_rates(q, {0.0, 0.0, p > 0.0 ? draw(rng) : 0.0});
  }
  return map;
}

std::vector<double> measurement_rates(const std::vector<std::vector<std::uint32_t>>& stabilizers,
                                      double p) {
  std::vector<double> out;
  out.reserve(stabilizers.size());
  for (const auto& s : stabilizers) {
    double rate = p * static_cast<double>(s.size()) / 4.0;
    if (!(rate >= 0.0 && rate < 0.5)) {
      throw std::invalid_argument("measurement failure rate " + std::to_string(rate) +
                                  " for a weight-" + std::to_string(s.size()) +
                                  " stabilizer is outside [0, 1/2)");
    }
    out.push_back(rate);
  }
  return out;
}

void attach_measurement_rates(NoiseMap& map, const CompassCode& code, double p_for_x_checks,
                              double p_for_z_checks) {
  map.x_measurement = measurement_rates(code.x_stabilizers, p_for_x_checks);
  map.z_measurement = measurement_rates(code.z_stabilizers, p_for_z_checks);
}

bool PauliSample::empty() const noexcept {
  auto none = [](const std::vector<std::uint8_t>& v) {
    for (auto b : v) {
      if (b) return false;
    }
    return true;
  };
  return none(z_flips) && none(x_flips) && none(x_measurement_flips) &&
         none(z_measurement_flips);
}

PauliSample sample_pauli(const NoiseMap& noise, std::size_t rounds, std::mt19937_64& rng) {
  if (rounds == 0) {
    throw std::invalid_argument("sample_pauli needs at least one round");
  }
  PauliSample s;
  const std::size_t n = noise.num_qubits();
  s.num_qubits = n;
  s.rounds = rounds;
  s.z_flips.assign(rounds * n, 0);
  s.x_flips.assign(rounds * n, 0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto rates = noise.all_rates();
  for (std::size_t t = 0; t < rounds; ++t) {
    std::uint8_t* zf = s.z_flips.data() + t * n;
    std::uint8_t* xf = s.x_flips.data() + t * n;
    for (std::size_t q = 0; q < n; ++q) {
      const PauliRates& r = rates[q];
      if (r.x == 0.0 && r.y == 0.0 && r.z == 0.0) continue;
      double u = uniform(rng);
      if (u < r.x) {
        xf[q] = 1;
      } else if (u < r.x + r.y) {
        xf[q] = 1;
        zf[q] = 1;
      } else if (u < r.x + r.y + r.z) {
        zf[q] = 1;
      }
    }
  }
  const std::size_t faulty = rounds - 1;
  auto flip_measurements = [&](const std::vector<double>& m, std::vector<std::uint8_t>& out) {
    out.assign(faulty * m.size(), 0);
    for (std::size_t t = 0; t < faulty; ++t) {
      for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k] > 0.0 && uniform(rng) < m[k]) out[t * m.size() + k] = 1;
      }
    }
  };
  flip_measurements(noise.x_measurement, s.x_measurement_flips);
  flip_measurements(noise.z_measurement, s.z_measurement_flips);
  return s;
}

std::string noise_map_csv(const NoiseMap& noise) {
  std::ostringstream out;
  out.precision(17);
  out << "i,j,p_x,p_y,p_z\n";
  const std::size_t L = noise.L();
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      const auto& r = noise.rates(i * L + j);
      out << i << ',' << j << ',' << r.x << ',' << r.y << ',' << r.z << '\n';
    }
  }
  return out.str();
}

}  // namespace compass
