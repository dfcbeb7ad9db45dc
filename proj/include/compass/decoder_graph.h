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
#include <span>
#include <string>
#include <vector>

#include "compass/compass_code.h"
#include "compass/noise.h"

namespace compass {

/// Which error species a graph decodes. Z errors are detected by X-type
/// stabilizers (north/south boundaries), X errors by Z-type stabilizers
/// (west/east boundaries).
enum class ErrorType : std::uint8_t { kZ = 0, kX = 1 };

/// kOpen keeps two distinct boundary vertices. kPeriodic identifies them
/// into one sink, so a boundary-to-boundary chain becomes a cycle through it.
enum class BoundaryMode : std::uint8_t { kOpen = 0, kPeriodic = 1 };

/// Decoder weighting never sees probabilities below this floor; it keeps
/// log-odds finite for qubits that cannot fail.
inline constexpr double kMinEdgeProbability = 1e-12;

struct GraphEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double probability = 0.0;
  bool seam = false;
  bool timelike = false;
  /// Space-like: layer of the data errors. Time-like: the faulty round.
  std::uint32_t layer = 0;
  /// Space-like: qubits merged into the edge. Time-like: the stabilizer.
  std::vector<std::uint32_t> payload;
};

/// Weighted decoder multigraph with parallel edges merged. Stabilizer
/// vertex s in layer t is t * num_stabilizers + s; boundary vertices follow
/// all stabilizer vertices and are shared by every layer.
class DecoderGraph {
 public:
  ErrorType type = ErrorType::kZ;
  BoundaryMode mode = BoundaryMode::kOpen;
  std::size_t L = 0;
  std::size_t num_qubits = 0;
  std::size_t num_stabilizers = 0;
  std::size_t num_layers = 1;
  std::size_t num_boundary = 0;
  std::vector<GraphEdge> edges;
  /// Edge carrying qubit q in layer t: qubit_edge[t * num_qubits + q].
  std::vector<std::uint32_t> qubit_edge;
  /// Time-like edge of stabilizer s after faulty round t, or -1 if the
  /// stabilizer's measurements never fail.
  std::vector<std::int32_t> time_edge;

  std::size_t num_vertices() const noexcept {
    return num_stabilizers * num_layers + num_boundary;
  }
  std::size_t num_bulk_vertices() const noexcept { return num_stabilizers * num_layers; }
  bool is_boundary(std::uint32_t v) const noexcept { return v >= num_bulk_vertices(); }

  std::span<const std::uint32_t> incident(std::uint32_t v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  /// Rebuilds the vertex -> incident-edge index. Called by the builders.
  void finalize();

  /// Lines "vertex <id> <kind>" and "edge <id> <u> <v> <p> <payload>".
  std::string dump() const;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

/// Odd-parity probability of k independent flips: (1 - prod(1 - 2 p_k)) / 2.
double merged_probability(std::span<const double> probabilities);

/// Vertices are X-stabilizers, one edge per qubit weighted by p_z + p_y, seam
/// on row floor(L/2).
DecoderGraph build_z_error_graph(const CompassCode& code, const NoiseMap& noise,
                                 BoundaryMode mode);

/// Vertices are Z-stabilizers, one edge per qubit weighted by p_x + p_y, seam
/// on column floor(L/2).
DecoderGraph build_x_error_graph(const CompassCode& code, const NoiseMap& noise,
                                 BoundaryMode mode);

/// Same as the builders above, with the seam placed on an explicit interior
/// row (Z graph) or column (X graph).
DecoderGraph build_decoder_graph(const CompassCode& code, const NoiseMap& noise, ErrorType type,
                                 BoundaryMode mode, std::size_t seam_line);

/// Recomputes the edge probabilities of a single-layer graph from new qubit
/// rates; the edge structure is unchanged.
void reweight(DecoderGraph& graph, const NoiseMap& noise);

/// rounds + 1 copies of a 2-D graph joined by time-like edges carrying each
/// stabilizer's measurement failure probability. Zero-probability
/// measurements get no time-like edge.
DecoderGraph build_spacetime_graph(const DecoderGraph& graph2d, std::size_t rounds,
                                   std::span<const double> measurement_rates);

/// Per-vertex marks; boundary vertices are never marked.
using Syndrome = std::vector<std::uint8_t>;

/// Marks every bulk vertex incident to an odd number of flagged edges.
Syndrome syndrome_of(const DecoderGraph& graph, std::span<const std::uint8_t> edge_flags);
Syndrome syndrome_of_edges(const DecoderGraph& graph, std::span<const std::uint32_t> edges);

/// Edge flags of the sample's errors (data flips plus, for space-time
/// graphs, measurement flips) as seen by this graph.
std::vector<std::uint8_t> project_sample(const DecoderGraph& graph, const PauliSample& sample);

/// Parity of flagged seam edges.
bool crosses_seam(const DecoderGraph& graph, std::span<const std::uint8_t> edge_flags);

}  // namespace compass
