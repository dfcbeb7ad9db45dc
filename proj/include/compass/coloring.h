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
#include <string>
#include <string_view>
#include <vector>

namespace compass {

class NoiseMap;

/// Gauge fix applied at one plaquette. Red cuts the Z-type (column pair)
/// stabilizer running through the plaquette, Blue cuts the X-type (row pair)
/// stabilizer, Blank leaves both gauge operators unfixed.
enum class Plaquette : std::uint8_t { kBlank = 0, kRed = 1, kBlue = 2 };

/// Planar lattices have (L-1)x(L-1) plaquettes. Toric lattices wrap in both
/// directions and have LxL plaquettes; they are only used to build spin
/// models, never decoder graphs.
enum class Topology : std::uint8_t { kPlanar = 0, kToric = 1 };

/// Plaquette coloring of an LxL qubit lattice. Cell (i, j) is the plaquette
/// whose top-left qubit is (i, j).
class Coloring {
 public:
  explicit Coloring(std::size_t L, Topology topology = Topology::kPlanar);

  std::size_t L() const noexcept { return L_; }
  Topology topology() const noexcept { return topology_; }
  /// Number of plaquette rows (equal to the number of plaquette columns).
  std::size_t cells_per_side() const noexcept { return side_; }

  Plaquette at(std::size_t i, std::size_t j) const { return cells_[i * side_ + j]; }
  void set(std::size_t i, std::size_t j, Plaquette value) { cells_[i * side_ + j] = value; }

  /// True when no plaquette is Blank, i.e. every gauge degree of freedom is fixed.
  bool is_subspace() const noexcept;
  std::size_t count(Plaquette value) const noexcept;

  bool operator==(const Coloring&) const = default;

 private:
  std::size_t L_;
  Topology topology_;
  std::size_t side_;
  std::vector<Plaquette> cells_;
};

/// Red iff (i - j) mod ell == 0, Blue otherwise. ell = 1 is Shor's code,
/// ell = 2 the rotated surface code.
Coloring elongated_coloring(std::size_t L, std::size_t ell, Topology topology = Topology::kPlanar);

/// Odd cells are Red; each even cell is Blue with probability q_surf and Red otherwise.
Coloring surface_density_coloring(std::size_t L, double q_surf, std::mt19937_64& rng,
                                  Topology topology = Topology::kPlanar);

/// Every cell is independently Blue with probability q_shor, else Red.
Coloring shor_density_coloring(std::size_t L, double q_shor, std::mt19937_64& rng,
                               Topology topology = Topology::kPlanar);

/// Cell (i, j) is Blue with probability clamp(2 p_z(i, j) / p_tot, 0, 1), where
/// p_z is the dephasing rate of the plaquette's top-left qubit.
Coloring tailored_coloring(const NoiseMap& noise, double p_tot, std::mt19937_64& rng);

/// Text grid: header "L=<n>" (suffix " toric" for toric lattices), then one
/// line per plaquette row using R, B and '.'.
std::string to_text(const Coloring& coloring);
Coloring parse_coloring(std::string_view text);

}  // namespace compass
