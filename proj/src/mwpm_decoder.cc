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

#include "compass/mwpm_decoder.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "compass/blossom.h"

namespace compass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Matching runs on integers; weights are rounded to this resolution.
constexpr double kWeightScale = 1e6;

using QueueItem = std::pair<double, std::uint32_t>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

std::uint32_t other_end(const GraphEdge& e, std::uint32_t v) { return e.u == v ? e.v : e.u; }

}  // namespace

MwpmDecoder::MwpmDecoder(const DecoderGraph& graph) : graph_(graph) { reweight(); }

void MwpmDecoder::reweight() {
  weight_.resize(graph_.edges.size());
  for (std::size_t id = 0; id < graph_.edges.size(); ++id) {
    const double p = graph_.edges[id].probability;
    const double w = std::log((1.0 - p) / p);
    if (!(w > 0.0)) {
      throw std::invalid_argument("edge " + std::to_string(id) + " has nonpositive weight");
    }
    weight_[id] = w;
  }
  const std::size_t n = graph_.num_vertices();
  boundary_dist_.assign(n, kInf);
  boundary_pred_.assign(n, -1);
  MinQueue queue;
  for (auto v = static_cast<std::uint32_t>(graph_.num_bulk_vertices()); v < n; ++v) {
    boundary_dist_[v] = 0.0;
    queue.emplace(0.0, v);
  }
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > boundary_dist_[v]) continue;
    for (auto id : graph_.incident(v)) {
      const std::uint32_t w = other_end(graph_.edges[id], v);
      if (graph_.is_boundary(w)) continue;
      const double nd = d + weight_[id];
      if (nd < boundary_dist_[w]) {
        boundary_dist_[w] = nd;
        boundary_pred_[w] = id;
        queue.emplace(nd, w);
      }
    }
  }
  dist_.assign(n, kInf);
  pred_.assign(n, -1);
}

void MwpmDecoder::sweep(std::uint32_t source, double cutoff, std::uint32_t target) {
  for (auto v : touched_) {
    dist_[v] = kInf;
    pred_[v] = -1;
  }
  touched_.clear();
  MinQueue queue;
  dist_[source] = 0.0;
  touched_.push_back(source);
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist_[v]) continue;
    if (v == target || d > cutoff) break;
    for (auto id : graph_.incident(v)) {
      const std::uint32_t w = other_end(graph_.edges[id], v);
      if (graph_.is_boundary(w)) continue;
      const double nd = d + weight_[id];
      if (nd < dist_[w]) {
        if (dist_[w] == kInf) touched_.push_back(w);
        dist_[w] = nd;
        pred_[w] = id;
        queue.emplace(nd, w);
      }
    }
  }
}

DefectGraph MwpmDecoder::path_weights(std::span<const std::uint32_t> defects) {
  DefectGraph dg;
  dg.defects.assign(defects.begin(), defects.end());
  const std::size_t D = defects.size();
  dg.weights.assign(D * D, kInf);
  dg.boundary_weight.resize(D);
  dg.boundary_vertex.resize(D);
  double max_boundary = 0.0;
  for (std::size_t a = 0; a < D; ++a) {
    const std::uint32_t v = defects[a];
    if (graph_.is_boundary(v)) throw std::invalid_argument("boundary vertices cannot be defects");
    dg.boundary_weight[a] = boundary_dist_[v];
    std::uint32_t x = v;
    while (boundary_pred_[x] >= 0) {
      x = other_end(graph_.edges[static_cast<std::size_t>(boundary_pred_[x])], x);
    }
    dg.boundary_vertex[a] = x;
    max_boundary = std::max(max_boundary, boundary_dist_[v]);
  }
  for (std::size_t a = 0; a < D; ++a) {
    dg.weights[a * D + a] = 0.0;
    if (a + 1 == D) break;
    sweep(defects[a], dg.boundary_weight[a] + max_boundary, UINT32_MAX);
    for (std::size_t b = a + 1; b < D; ++b) {
      const double w = dist_[defects[b]];
      if (w < dg.boundary_weight[a] + dg.boundary_weight[b]) {
        dg.weights[a * D + b] = w;
        dg.weights[b * D + a] = w;
      }
    }
  }
  return dg;
}

Pairing MwpmDecoder::match(const DefectGraph& dg) const {
  const std::size_t D = dg.size();
  Pairing result;
  result.partner.assign(D, Pairing::kBoundary);
  if (D == 0) return result;
  auto scaled = [](double w) { return static_cast<std::int64_t>(std::llround(w * kWeightScale)); };
  std::vector<MatchingEdge> edges;
  for (std::uint32_t a = 0; a < D; ++a) {
    for (std::uint32_t b = a + 1; b < D; ++b) {
      const double w = dg.weight(a, b);
      if (std::isfinite(w)) edges.push_back({a, b, scaled(w)});
    }
    if (std::isfinite(dg.boundary_weight[a])) {
      edges.push_back({a, static_cast<std::uint32_t>(D + a), scaled(dg.boundary_weight[a])});
    }
    for (std::uint32_t b = a + 1; b < D; ++b) {
      edges.push_back({static_cast<std::uint32_t>(D + a), static_cast<std::uint32_t>(D + b), 0});
    }
  }
  const auto mate = min_weight_perfect_matching(2 * D, edges);
  for (std::size_t a = 0; a < D; ++a) {
    const auto m = static_cast<std::size_t>(mate[a]);
    if (m < D) {
      result.partner[a] = static_cast<std::uint32_t>(m);
      if (a < m) result.total_weight += dg.weight(a, m);
    } else {
      result.total_weight += dg.boundary_weight[a];
    }
  }
  return result;
}

std::vector<std::uint32_t> MwpmDecoder::shortest_path(std::uint32_t u, std::uint32_t v) {
  sweep(u, kInf, v);
  if (!std::isfinite(dist_[v])) throw std::logic_error("no bulk path between matched defects");
  std::vector<std::uint32_t> path;
  for (std::uint32_t x = v; x != u;) {
    const auto id = static_cast<std::uint32_t>(pred_[x]);
    path.push_back(id);
    x = other_end(graph_.edges[id], x);
  }
  return path;
}

std::vector<std::uint32_t> MwpmDecoder::boundary_path(std::uint32_t u) const {
  if (!std::isfinite(boundary_dist_[u])) throw std::logic_error("defect cannot reach a boundary");
  std::vector<std::uint32_t> path;
  for (std::uint32_t x = u; boundary_pred_[x] >= 0;) {
    const auto id = static_cast<std::uint32_t>(boundary_pred_[x]);
    path.push_back(id);
    x = other_end(graph_.edges[id], x);
  }
  return path;
}

std::vector<std::uint32_t> MwpmDecoder::decode(std::span<const std::uint8_t> syndrome) {
  if (syndrome.size() != graph_.num_vertices()) {
    throw std::invalid_argument("syndrome size does not match the graph");
  }
  std::vector<std::uint32_t> defects;
  for (std::uint32_t v = 0; v < graph_.num_bulk_vertices(); ++v) {
    if (syndrome[v]) defects.push_back(v);
  }
  if (defects.empty()) return {};
  const DefectGraph dg = path_weights(defects);
  const Pairing pairing = match(dg);
  std::vector<std::uint8_t> flags(graph_.edges.size(), 0);
  for (std::size_t a = 0; a < defects.size(); ++a) {
    const std::uint32_t b = pairing.partner[a];
    std::vector<std::uint32_t> path;
    if (b == Pairing::kBoundary) {
      path = boundary_path(defects[a]);
    } else if (a < b) {
      path = shortest_path(defects[a], defects[b]);
    }
    for (auto id : path) flags[id] ^= 1;
  }
  std::vector<std::uint32_t> correction;
  for (std::uint32_t id = 0; id < flags.size(); ++id) {
    if (flags[id]) correction.push_back(id);
  }
  return correction;
}

}  // namespace compass
