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
#include <vector>

#include "compass/decoder_graph.h"

namespace compass {

/// Shortest-path metric between the marked vertices of one syndrome.
struct DefectGraph {
  std::vector<std::uint32_t> defects;
  /// Row-major defects x defects; +inf where a pair is never worth matching
  /// directly (its path is at least as heavy as sending both to the boundary).
  std::vector<double> weights;
  std::vector<double> boundary_weight;
  std::vector<std::uint32_t> boundary_vertex;

  std::size_t size() const noexcept { return defects.size(); }
  double weight(std::size_t a, std::size_t b) const noexcept { return weights[a * size() + b]; }
};

/// Result of matching a defect graph. partner[a] is the index of the defect
/// matched with a, or kBoundary.
struct Pairing {
  static constexpr std::uint32_t kBoundary = UINT32_MAX;
  std::vector<std::uint32_t> partner;
  double total_weight = 0.0;
};

/// Minimum-weight perfect matching decoder over edge weights log((1-p)/p).
/// Each defect gets a virtual boundary partner; virtual pairs cost nothing.
/// Holds scratch state; use one instance per worker thread.
class MwpmDecoder {
 public:
  explicit MwpmDecoder(const DecoderGraph& graph);

  /// Rereads the edge probabilities of the graph.
  void reweight();

  DefectGraph path_weights(std::span<const std::uint32_t> defects);
  Pairing match(const DefectGraph& defects) const;
  /// Returns the correction as sorted edge ids.
  std::vector<std::uint32_t> decode(std::span<const std::uint8_t> syndrome);

  /// Edges of a lightest bulk path from u to v (no boundary vertices inside).
  std::vector<std::uint32_t> shortest_path(std::uint32_t u, std::uint32_t v);
  /// Edges of a lightest path from u to the nearest boundary vertex.
  std::vector<std::uint32_t> boundary_path(std::uint32_t u) const;

  double edge_weight(std::uint32_t edge) const noexcept { return weight_[edge]; }
  double boundary_distance(std::uint32_t v) const noexcept { return boundary_dist_[v]; }
  const DecoderGraph& graph() const noexcept { return graph_; }

 private:
  /// Dijkstra from `source` through bulk vertices, stopping once the
  /// frontier exceeds `cutoff` or `target` is settled.
  void sweep(std::uint32_t source, double cutoff, std::uint32_t target);

  const DecoderGraph& graph_;
  std::vector<double> weight_;
  std::vector<double> boundary_dist_;
  std::vector<std::int64_t> boundary_pred_;

  std::vector<double> dist_;
  std::vector<std::int64_t> pred_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace compass
