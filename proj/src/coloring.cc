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

#include "compass/coloring.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "compass/noise.h"

namespace compass {

namespace {

void check_probability(double q, const char* name) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

Coloring::Coloring(std::size_t L, Topology topology)
    : L_(L), topology_(topology), side_(topology == Topology::kToric ? L : L - 1) {
  if (L < 2) {
    throw std::invalid_argument("lattice size L must be at least 2");
  }
  cells_.assign(side_ * side_, Plaquette::kBlank);
}

bool Coloring::is_subspace() const noexcept { return count(Plaquette::kBlank) == 0; }

std::size_t Coloring::count(Plaquette value) const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), value));
}

Coloring elongated_coloring(std::size_t L, std::size_t ell, Topology topology) {
  if (ell == 0) {
    throw std::invalid_argument("elongation must be positive");
  }
  Coloring c(L, topology);
  const std::size_t n = c.cells_per_side();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // (i - j) mod ell without going negative.
      std::size_t diff = (i + ell * n - j) % ell;
      c.set(i, j, diff == 0 ? Plaquette::kRed : Plaquette::kBlue);
    }
  }
  return c;
}

Coloring surface_density_coloring(std::size_t L, double q_surf, std::mt19937_64& rng,
                                  Topology topology) {
  check_probability(q_surf, "q_surf");
  Coloring c(L, topology);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n = c.cells_per_side();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((i + j) % 2 == 1) {
        c.set(i, j, Plaquette::kRed);
      } else {
        c.set(i, j, uniform(rng) < q_surf ? Plaquette::kBlue : Plaquette::kRed);
      }
    }
  }
  return c;
}

Coloring shor_density_coloring(std::size_t L, double q_shor, std::mt19937_64& rng,
                               Topology topology) {
  check_probability(q_shor, "q_shor");
  Coloring c(L, topology);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t n = c.cells_per_side();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c.set(i, j, uniform(rng) < q_shor ? Plaquette::kBlue : Plaquette::kRed);
    }
  }
  return c;
}

Coloring tailored_coloring(const NoiseMap& noise, double p_tot, std::mt19937_64& rng) {
  if (!(p_tot > 0.0)) {
    throw std::invalid_argument("p_tot must be positive");
  }
  const std::size_t L = noise.L();
  Coloring c(L);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    for (std::size_t j = 0; j + 1 < L; ++j) {
      double cut = std::clamp(2.0 * noise.rates(i * L + j).z / p_tot, 0.0, 1.0);
      c.set(i, j, uniform(rng) < cut ? Plaquette::kBlue : Plaquette::kRed);
    }
  }
  return c;
}

std::string to_text(const Coloring& coloring) {
  std::ostringstream out;
  out << "L=" << coloring.L();
  if (coloring.topology() == Topology::kToric) {
    out << " toric";
  }
  out << '\n';
  const std::size_t n = coloring.cells_per_side();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      switch (coloring.at(i, j)) {
        case Plaquette::kRed:
          out << 'R';
          break;
        case Plaquette::kBlue:
          out << 'B';
          break;
        case Plaquette::kBlank:
          out << '.';
          break;
      }
    }
    out << '\n';
  }
  return out.str();
}

Coloring parse_coloring(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string header;
  if (!std::getline(in, header) || header.rfind("L=", 0) != 0) {
    throw std::invalid_argument("coloring text must start with a header line 'L=<n>'");
  }
  Topology topology = Topology::kPlanar;
  std::string size_part = header.substr(2);
  if (auto space = size_part.find(' '); space != std::string::npos) {
    std::string suffix = size_part.substr(space + 1);
    size_part = size_part.substr(0, space);
    if (suffix != "toric") {
      throw std::invalid_argument("unknown coloring header suffix '" + suffix + "'");
    }
    topology = Topology::kToric;
  }
  std::size_t L = 0;
  try {
    L = std::stoul(size_part);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad lattice size in coloring header '" + header + "'");
  }
  Coloring c(L, topology);
  const std::size_t n = c.cells_per_side();
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line) || line.size() != n) {
      throw std::invalid_argument("coloring row " + std::to_string(i) + " must have " +
                                  std::to_string(n) + " cells");
    }
    for (std::size_t j = 0; j < n; ++j) {
      switch (line[j]) {
        case 'R':
          c.set(i, j, Plaquette::kRed);
          break;
        case 'B':
          c.set(i, j, Plaquette::kBlue);
          break;
        case '.':
          c.set(i, j, Plaquette::kBlank);
          break;
        default:
          throw std::invalid_argument(std::string("unexpected coloring character '") + line[j] +
                                      "'");
      }
    }
  }
  return c;
}

}  // namespace compass
