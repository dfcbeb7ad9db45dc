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
#include <string>
#include <vector>

#include "compass/coloring.h"

namespace compass {

using QubitSupport = std::vector<std::uint32_t>;

/// CSS compass code on an LxL lattice. Qubit (i, j) has index i * L + j.
/// X-stabilizers live on adjacent row pairs, Z-stabilizers on adjacent column
/// pairs; supports are sorted ascending.
struct CompassCode {
  std::size_t L = 0;
  Topology topology = Topology::kPlanar;
  bool subspace = false;
  std::vector<QubitSupport> x_stabilizers;
  std::vector<QubitSupport> z_stabilizers;

  std::size_t num_qubits() const noexcept { return L * L; }
};

/// Gauge-fixes the Bacon-Shor template according to the coloring: row-pair
/// X-stabilizers are split at every Blue plaquette of the pair, column-pair
/// Z-stabilizers at every Red plaquette.
CompassCode build_code(const Coloring& coloring);

struct CodeReport {
  std::vector<std::string> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks commutation, the two-stabilizers-per-qubit bound and, for planar
/// subspace codes, the L^2 - 1 generator count.
CodeReport validate_code(const CompassCode& code);

}  // namespace compass
