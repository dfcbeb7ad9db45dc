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
#include <random>
#include <span>
#include <string>
#include <vector>

namespace compass {

struct CompassCode;

/// Single-qubit Pauli error probabilities.
struct PauliRates {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double total() const noexcept { return x + y + z; }
  /// Probability that a Z-type check sees a flip (X or Y error).
  double x_marginal() const noexcept { return x + y; }
  /// Probability that an X-type check sees a flip (Z or Y error).
  double z_marginal() const noexcept { return z + y; }
};

/// eta-biased depolarizing channel with p_x = p_y.
struct BiasedChannel {
  double p = 0.0;
  double eta = 0.5;
  PauliRates rates;
};

/// eta may be +infinity (pure dephasing).
BiasedChannel channel_from_bias(double p, double eta);

/// Inverse of channel_from_bias: returns {p, eta} for rates with x == y.
std::pair<double, double> bias_from_rates(const PauliRates& rates);

/// Average fidelity of a single-qubit Pauli channel to the identity.
double average_fidelity(const PauliRates& rates);

/// Per-qubit Pauli rates plus per-stabilizer measurement failure
/// probabilities (empty in the code-capacity setting).
class NoiseMap {
 public:
  NoiseMap() = default;
  explicit NoiseMap(std::size_t L);

  std::size_t L() const noexcept { return L_; }
  std::size_t num_qubits() const noexcept { return rates_.size(); }

  const PauliRates& rates(std::size_t qubit) const { return rates_[qubit]; }
  void set_rates(std::size_t qubit, PauliRates r);
  std::span<const PauliRates> all_rates() const noexcept { return rates_; }

  /// Failure probabilities of X-type (resp. Z-type) stabilizer measurements,
  /// indexed like CompassCode::x_stabilizers (resp. z_stabilizers).
  std::vector<double> x_measurement;
  std::vector<double> z_measurement;

  double mean_total() const noexcept;
  double mean_z_marginal() const noexcept;
  double mean_x_marginal() const noexcept;

 private:
  std::size_t L_ = 0;
  std::vector<PauliRates> rates_;
};

NoiseMap uniform_map(std::size_t L, const PauliRates& rates);

/// p_z(i, j) = (w j/L + (1 - w)(1 - j/L)) p_tot / 2, p_x = p_tot / 2, p_y = 0.
NoiseMap linear_profile_map(std::size_t L, double p_tot, double w);

/// Pure dephasing with each qubit's rate drawn uniformly from [0, 2p].
NoiseMap random_uniform_map(std::size_t L, double p, std::mt19937_64& rng);

/// Failure probability p * |S| / 4 for each stabilizer weight.
std::vector<double> measurement_rates(const std::vector<std::vector<std::uint32_t>>& stabilizers,
                                      double p);

/// Fills the map's measurement vectors for `code`, scaling the Z-error
/// decoder's checks (X-stabilizers) with `p_for_x_checks` and the X-error
/// decoder's checks (Z-stabilizers) with `p_for_z_checks`.
void attach_measurement_rates(NoiseMap& map, const CompassCode& code, double p_for_x_checks,
                              double p_for_z_checks);

/// Realized errors over `rounds` syndrome rounds. Data errors strike before
/// every round; all rounds but the last report faulty outcomes.
struct PauliSample {
  std::size_t num_qubits = 0;
  std::size_t rounds = 1;
  /// [round * num_qubits + qubit]; a Y sets both.
  std::vector<std::uint8_t> z_flips;
  std::vector<std::uint8_t> x_flips;
  /// [round * num_x_stabilizers + s] for rounds 0 .. rounds-2.
  std::vector<std::uint8_t> x_measurement_flips;
  std::vector<std::uint8_t> z_measurement_flips;

  bool empty() const noexcept;
};

PauliSample sample_pauli(const NoiseMap& noise, std::size_t rounds, std::mt19937_64& rng);

/// CSV with header "i,j,p_x,p_y,p_z".
std::string noise_map_csv(const NoiseMap& noise);

}  // namespace compass
