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

#include "compass/decoder_graph.h"

namespace compass {

/// Result of weighted syndrome validation. Boundary vertices never join the
/// disjoint-set forest; a cluster that fully grows an edge onto the boundary
/// is flagged and from then on counts as even.
struct ClusterState {
  std::vector<std::uint32_t> parent;
  std::vector<std::uint8_t> rank;
  /// Per root: number of marked vertices mod 2.
  std::vector<std::uint8_t> parity;
  /// Per root: the cluster has absorbed a boundary edge.
  std::vector<std::uint8_t> touches_boundary;
  /// Per vertex: part of a grown cluster (marked, or reached by growth).
  std::vector<std::uint8_t> active;
  /// Per edge: 0, 1 (half grown) or 2 (fully grown, i.e. erased).
  std::vector<std::uint8_t> support;
  /// Number of growth steps performed.
  std::size_t growth_steps = 0;

  std::uint32_t find(std::uint32_t v) const;
  std::uint32_t find(std::uint32_t v);
};

/// Maximum-weight spanning forest of the erasure. Every fully grown boundary
/// edge is an open edge, as if each led to its own boundary leaf.
struct ErasureForest {
  std::vector<std::uint32_t> tree_edges;
  std::vector<std::uint32_t> open_edges;
};

/// Edge of a stand-alone parity tree; `b == kOpenEnd` marks an open edge
/// leading to the boundary, which carries no parity constraint.
struct ParityTreeEdge {
  static constexpr std::uint32_t kOpenEnd = UINT32_MAX;
  std::uint32_t a = 0;
  std::uint32_t b = kOpenEnd;
  double log_odds = 0.0;
};

/// Maximum-total-log-odds edge subset S such that every vertex v has
/// |S ∩ incident(v)| ≡ marks[v] (mod 2). The edges must form a tree on
/// vertices 0..n-1 (plus open ends). Returns indices into `edges`; throws
/// std::logic_error if no consistent subset exists.
std::vector<std::size_t> solve_parity_tree(std::size_t num_vertices,
                                           std::span<const ParityTreeEdge> edges,
                                           std::span<const std::uint8_t> marks,
                                           std::uint32_t root = 0);

/// Union-find decoder with weighted growth (every odd cluster sharing the
/// smallest frontier grows in the same step), a Kruskal maximum-probability
/// spanning forest and peeling that finishes trees with open boundary edges
/// by dynamic programming over the tree.
/// Holds scratch state; use one instance per worker thread.
class UnionFindDecoder {
 public:
  struct Options {
    /// false: every edge gets the same weight in Kruskal and the tree DP.
    bool weighted = true;
    /// Record a human-readable growth trace.
    bool trace = false;
  };

  explicit UnionFindDecoder(const DecoderGraph& graph);
  UnionFindDecoder(const DecoderGraph& graph, Options options);

  /// Rereads the edge probabilities of the graph.
  void reweight();

  /// Full pipeline; returns the correction as edge ids (sorted).
  std::vector<std::uint32_t> decode(std::span<const std::uint8_t> syndrome);

  ClusterState validate(std::span<const std::uint8_t> syndrome);
  ErasureForest spanning_forest(const ClusterState& state) const;
  /// Peels leaves and solves what remains with solve-parity-tree logic.
  std::vector<std::uint32_t> peel(const ErasureForest& forest,
                                  std::span<const std::uint8_t> syndrome);

  const std::string& trace() const noexcept { return trace_; }
  const DecoderGraph& graph() const noexcept { return graph_; }

 private:
  double weight(std::uint32_t edge) const noexcept { return log_odds_[edge]; }

  const DecoderGraph& graph_;
  Options options_;
  std::vector<double> log_odds_;
  std::string trace_;

  // Scratch for validate().
  std::vector<std::vector<std::uint32_t>> frontier_;
  // Scratch for peel().
  std::vector<std::uint32_t> forest_offsets_;
  std::vector<std::uint32_t> forest_adjacency_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint8_t> edge_alive_;
  std::vector<std::uint8_t> marks_;
};

}  // namespace compass
