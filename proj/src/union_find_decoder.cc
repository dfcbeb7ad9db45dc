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

#include "compass/union_find_decoder.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace compass {

std::uint32_t ClusterState::find(std::uint32_t v) const {
  while (parent[v] != v) v = parent[v];
  return v;
}

std::uint32_t ClusterState::find(std::uint32_t v) {
  // Path halving.
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::vector<std::size_t> solve_parity_tree(std::size_t num_vertices,
                                           std::span<const ParityTreeEdge> edges,
                                           std::span<const std::uint8_t> marks,
                                           std::uint32_t root) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t n = num_vertices;
  if (n == 0) return {};
  if (root >= n || marks.size() < n) {
    throw std::invalid_argument("parity tree root or marks out of range");
  }
  std::vector<std::uint32_t> offsets(n + 1, 0);
  std::size_t internal = 0;
  for (const auto& e : edges) {
    if (e.a >= n || (e.b != ParityTreeEdge::kOpenEnd && e.b >= n)) {
      throw std::invalid_argument("parity tree edge endpoint out of range");
    }
    ++offsets[e.a + 1];
    if (e.b != ParityTreeEdge::kOpenEnd) {
      ++offsets[e.b + 1];
      ++internal;
    }
  }
  if (internal + 1 != n) {
    throw std::invalid_argument("parity tree must have exactly n - 1 internal edges");
  }
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<std::uint32_t> adj(offsets[n]);
  {
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t k = 0; k < edges.size(); ++k) {
      adj[fill[edges[k].a]++] = k;
      if (edges[k].b != ParityTreeEdge::kOpenEnd) adj[fill[edges[k].b]++] = k;
    }
  }

  // Pre-order traversal; parent_edge[root] = none.
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> parent_edge(n, kNone);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<std::uint32_t> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    std::uint32_t v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      const auto& e = edges[adj[k]];
      if (e.b == ParityTreeEdge::kOpenEnd || adj[k] == parent_edge[v]) continue;
      std::uint32_t w = e.a == v ? e.b : e.a;
      if (seen[w]) {
        throw std::invalid_argument("parity tree edges contain a cycle");
      }
      seen[w] = 1;
      parent_edge[w] = adj[k];
      stack.push_back(w);
    }
  }
  if (order.size() != n) {
    throw std::invalid_argument("parity tree is not connected");
  }

  // best_[v][s]: best weight of v's subtree given the parent edge is in S
  // (s = 1) or not (s = 0), excluding the parent edge's own weight.
  std::vector<double> best_out(n, 0.0);
  std::vector<double> best_in(n, 0.0);

  auto child_values = [&](std::uint32_t v, std::uint32_t k, double& take, double& skip) {
    const auto& e = edges[adj[k]];
    if (e.b == ParityTreeEdge::kOpenEnd) {
      take = e.log_odds;
      skip = 0.0;
    } else {
      std::uint32_t c = e.a == v ? e.b : e.a;
      take = e.log_odds + best_in[c];
      skip = best_out[c];
    }
  };
  auto is_child = [&](std::uint32_t v, std::uint32_t k) {
    return adj[k] != parent_edge[v];
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::uint32_t v = *it;
    double base = 0.0;
    int parity = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    bool any_child = false;
    for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      if (!is_child(v, k)) continue;
      any_child = true;
      double take, skip;
      child_values(v, k, take, skip);
      if (take == kNegInf && skip == kNegInf) {
        base = kNegInf;
        continue;
      }
      if (take > skip) {
        base += take;
        parity ^= 1;
      } else {
        base += skip;
      }
      if (take != kNegInf && skip != kNegInf) min_gap = std::min(min_gap, std::abs(take - skip));
    }
    auto best_for = [&](int target) {
      if (base == kNegInf) return kNegInf;
      if (parity == target) return base;
      if (!any_child || std::isinf(min_gap)) return kNegInf;
      return base - min_gap;
    };
    best_out[v] = best_for(marks[v] & 1);
    best_in[v] = best_for((marks[v] & 1) ^ 1);
  }
  if (best_out[root] == kNegInf) {
    throw std::logic_error("no edge subset matches the parity constraints of the tree");
  }

  // Top-down reconstruction.
  std::vector<std::uint8_t> state(n, 0);  // parent edge in S?
  std::vector<std::size_t> chosen;
  for (std::uint32_t v : order) {
    int target = (marks[v] & 1) ^ state[v];
    int parity = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    std::uint32_t flip = kNone;
    // First pass: preferred state for every child.
    for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      if (!is_child(v, k)) continue;
      double take, skip;
      child_values(v, k, take, skip);
      if (take > skip) parity ^= 1;
      if (take != kNegInf && skip != kNegInf) {
        double gap = std::abs(take - skip);
        if (gap < min_gap) {
          min_gap = gap;
          flip = k;
        }
      }
    }
    const bool need_flip = parity != target;
    for (std::uint32_t k = offsets[v]; k < offsets[v + 1]; ++k) {
      if (!is_child(v, k)) continue;
      double take, skip;
      child_values(v, k, take, skip);
      bool in = take > skip;
      if (need_flip && k == flip) in = !in;
      const auto& e = edges[adj[k]];
      if (in) chosen.push_back(adj[k]);
      if (e.b != ParityTreeEdge::kOpenEnd) {
        std::uint32_t c = e.a == v ? e.b : e.a;
        state[c] = in ? 1 : 0;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

UnionFindDecoder::UnionFindDecoder(const DecoderGraph& graph)
    : UnionFindDecoder(graph, Options{}) {}

UnionFindDecoder::UnionFindDecoder(const DecoderGraph& graph, Options options)
    : graph_(graph), options_(options) {
  reweight();
}

void UnionFindDecoder::reweight() {
  log_odds_.resize(graph_.edges.size());
  for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
    double p = graph_.edges[e].probability;
    log_odds_[e] = options_.weighted ? std::log(p / (1.0 - p)) : -1.0;
  }
}

ClusterState UnionFindDecoder::validate(std::span<const std::uint8_t> syndrome) {
  const auto V = static_cast<std::uint32_t>(graph_.num_vertices());
  const auto& edges = graph_.edges;
  if (syndrome.size() != V) {
    throw std::invalid_argument("syndrome size does not match the decoder graph");
  }
  ClusterState st;
  st.parent.resize(V);
  std::iota(st.parent.begin(), st.parent.end(), 0u);
  st.rank.assign(V, 0);
  st.parity.assign(V, 0);
  st.touches_boundary.assign(V, 0);
  st.active.assign(V, 0);
  st.support.assign(edges.size(), 0);
  if (frontier_.size() != V) frontier_.resize(V);
  if (options_.trace) trace_.clear();

  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (frontier size, root)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  auto activate = [&](std::uint32_t v) {
    st.active[v] = 1;
    auto inc = graph_.incident(v);
    frontier_[v].assign(inc.begin(), inc.end());
  };
  auto clean = [&](std::uint32_t r) {
    auto& f = frontier_[r];
    std::size_t keep = 0;
    for (std::uint32_t e : f) {
      if (st.support[e] >= 2) continue;
      const auto& ed = edges[e];
      if (!graph_.is_boundary(ed.u) && !graph_.is_boundary(ed.v) && st.find(ed.u) == st.find(ed.v)) {
        continue;
      }
      f[keep++] = e;
    }
    f.resize(keep);
    return static_cast<std::uint32_t>(keep);
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    if (st.rank[a] < st.rank[b]) std::swap(a, b);
    st.parent[b] = a;
    if (st.rank[a] == st.rank[b]) ++st.rank[a];
    st.parity[a] ^= st.parity[b];
    st.touches_boundary[a] |= st.touches_boundary[b];
    auto& fa = frontier_[a];
    auto& fb = frontier_[b];
    if (fa.size() < fb.size()) fa.swap(fb);
    fa.insert(fa.end(), fb.begin(), fb.end());
    fb.clear();
    return a;
  };

  for (std::uint32_t v = 0; v < V; ++v) {
    if (graph_.is_boundary(v)) {
      if (syndrome[v]) throw std::invalid_argument("boundary vertices cannot be marked");
      continue;
    }
    if (syndrome[v]) {
      st.parity[v] = 1;
      activate(v);
      queue.emplace(static_cast<std::uint32_t>(frontier_[v].size()), v);
    }
  }

  std::vector<std::uint32_t> fused;
  std::vector<std::uint32_t> batch;
  while (!queue.empty()) {
    // Every odd cluster whose frontier is currently the smallest grows in
    // the same step.
    batch.clear();
    std::uint32_t smallest = 0;
    while (!queue.empty()) {
      auto [size, r] = queue.top();
      if (!batch.empty() && size > smallest) break;
      queue.pop();
      if (st.parent[r] != r || !st.parity[r] || st.touches_boundary[r]) continue;
      if (std::find(batch.begin(), batch.end(), r) != batch.end()) continue;
      std::uint32_t now = clean(r);
      if (now != size) {
        queue.emplace(now, r);
        continue;
      }
      if (now == 0) {
        throw std::logic_error("odd cluster cannot grow: syndrome inconsistent with graph");
      }
      smallest = now;
      batch.push_back(r);
    }
    if (batch.empty()) break;
    ++st.growth_steps;
    fused.clear();
    for (std::uint32_t r : batch) {
      if (options_.trace) {
        std::ostringstream line;
        line << "grow root=" << r << " frontier=" << frontier_[r].size() << '\n';
        trace_ += line.str();
      }
      for (std::uint32_t e : frontier_[r]) {
        if (st.support[e] < 2 && ++st.support[e] == 2) fused.push_back(e);
      }
    }
    for (std::uint32_t e : fused) {
      std::uint32_t u = edges[e].u;
      std::uint32_t v = edges[e].v;
      if (options_.trace) {
        std::ostringstream line;
        line << "fuse edge=" << e << " (" << u << "," << v << ")\n";
        trace_ += line.str();
      }
      if (graph_.is_boundary(u) || graph_.is_boundary(v)) {
        std::uint32_t inner = graph_.is_boundary(u) ? v : u;
        st.touches_boundary[st.find(inner)] = 1;
        continue;
      }
      if (!st.active[u]) activate(u);
      if (!st.active[v]) activate(v);
      std::uint32_t ru = st.find(u);
      std::uint32_t rv = st.find(v);
      if (ru != rv) unite(ru, rv);
    }
    for (std::uint32_t r : batch) {
      std::uint32_t root = st.find(r);
      if (st.parity[root] && !st.touches_boundary[root]) {
        queue.emplace(clean(root), root);
      }
    }
  }
  return st;
}

ErasureForest UnionFindDecoder::spanning_forest(const ClusterState& state) const {
  ErasureForest forest;
  const auto& edges = graph_.edges;
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    if (state.support[e] < 2) continue;
    if (graph_.is_boundary(edges[e].u) || graph_.is_boundary(edges[e].v)) {
      forest.open_edges.push_back(e);
    } else {
      candidates.push_back(e);
    }
  }
  if (options_.weighted) {
    std::sort(candidates.begin(), candidates.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (edges[a].probability != edges[b].probability) {
        return edges[a].probability > edges[b].probability;
      }
      return a < b;
    });
  }
  // Kruskal on a scratch disjoint-set forest restricted to touched vertices.
  std::vector<std::uint32_t> parent(graph_.num_vertices());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (std::uint32_t e : candidates) {
    std::uint32_t a = find(edges[e].u);
    std::uint32_t b = find(edges[e].v);
    if (a == b) continue;
    parent[a] = b;
    forest.tree_edges.push_back(e);
  }
  return forest;
}

std::vector<std::uint32_t> UnionFindDecoder::peel(const ErasureForest& forest,
                                                  std::span<const std::uint8_t> syndrome) {
  const auto& edges = graph_.edges;
  const auto V = static_cast<std::uint32_t>(graph_.num_vertices());
  std::vector<std::uint32_t> correction;

  marks_.assign(syndrome.begin(), syndrome.end());
  degree_.assign(V, 0);
  edge_alive_.assign(edges.size(), 0);
  auto bulk = [&](std::uint32_t v) { return !graph_.is_boundary(v); };

  auto add = [&](std::uint32_t e) {
    edge_alive_[e] = 1;
    if (bulk(edges[e].u)) ++degree_[edges[e].u];
    if (bulk(edges[e].v)) ++degree_[edges[e].v];
  };
  for (auto e : forest.tree_edges) add(e);
  for (auto e : forest.open_edges) add(e);

  forest_offsets_.assign(V + 1, 0);
  for (std::uint32_t v = 0; v < V; ++v) forest_offsets_[v + 1] = forest_offsets_[v] + degree_[v];
  forest_adjacency_.resize(forest_offsets_[V]);
  {
    std::vector<std::uint32_t> fill(forest_offsets_.begin(), forest_offsets_.end() - 1);
    auto place = [&](std::uint32_t e) {
      if (bulk(edges[e].u)) forest_adjacency_[fill[edges[e].u]++] = e;
      if (bulk(edges[e].v)) forest_adjacency_[fill[edges[e].v]++] = e;
    };
    for (auto e : forest.tree_edges) place(e);
    for (auto e : forest.open_edges) place(e);
  }

  std::vector<std::uint32_t> leaves;
  for (std::uint32_t v = 0; v < V; ++v) {
    if (bulk(v) && degree_[v] == 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    std::uint32_t v = leaves.back();
    leaves.pop_back();
    if (degree_[v] != 1) continue;
    std::uint32_t e = UINT32_MAX;
    for (std::uint32_t k = forest_offsets_[v]; k < forest_offsets_[v + 1]; ++k) {
      if (edge_alive_[forest_adjacency_[k]]) {
        e = forest_adjacency_[k];
        break;
      }
    }
    std::uint32_t other = edges[e].u == v ? edges[e].v : edges[e].u;
    if (marks_[v]) {
      correction.push_back(e);
      marks_[v] = 0;
      if (bulk(other)) marks_[other] ^= 1;
    }
    edge_alive_[e] = 0;
    --degree_[v];
    if (bulk(other)) {
      if (--degree_[other] == 1) leaves.push_back(other);
    }
  }
  for (std::uint32_t v = 0; v < V; ++v) {
    if (bulk(v) && degree_[v] == 0 && marks_[v]) {
      throw std::logic_error("peeling left a marked vertex with no edges (validation bug)");
    }
  }

  // What remains are trees whose leaves all carry open edges.
  std::vector<std::int32_t> local(V, -1);
  std::vector<std::uint32_t> members;
  std::vector<ParityTreeEdge> tree;
  std::vector<std::uint32_t> tree_ids;
  std::vector<std::uint8_t> local_marks;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t start = 0; start < V; ++start) {
    if (!bulk(start) || degree_[start] == 0 || local[start] >= 0) continue;
    members.clear();
    tree.clear();
    tree_ids.clear();
    local_marks.clear();
    stack.assign(1, start);
    local[start] = 0;
    members.push_back(start);
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t k = forest_offsets_[v]; k < forest_offsets_[v + 1]; ++k) {
        std::uint32_t e = forest_adjacency_[k];
        if (!edge_alive_[e]) continue;
        std::uint32_t w = edges[e].u == v ? edges[e].v : edges[e].u;
        if (!bulk(w)) {
          tree.push_back({static_cast<std::uint32_t>(local[v]), ParityTreeEdge::kOpenEnd,
                          weight(e)});
          tree_ids.push_back(e);
          continue;
        }
        if (local[w] < 0) {
          local[w] = static_cast<std::int32_t>(members.size());
          members.push_back(w);
          stack.push_back(w);
        }
        // Record each internal edge once, from its lower-id endpoint.
        if (v < w) {
          tree.push_back({static_cast<std::uint32_t>(local[v]), static_cast<std::uint32_t>(local[w]),
                          weight(e)});
          tree_ids.push_back(e);
        }
      }
    }
    for (auto m : members) local_marks.push_back(marks_[m]);
    for (std::size_t k : solve_parity_tree(members.size(), tree, local_marks, 0)) {
      correction.push_back(tree_ids[k]);
    }
    if (options_.trace) {
      std::ostringstream line;
      line << "tree-dp root=" << start << " vertices=" << members.size()
           << " edges=" << tree.size() << '\n';
      trace_ += line.str();
    }
  }
  std::sort(correction.begin(), correction.end());
  return correction;
}

std::vector<std::uint32_t> UnionFindDecoder::decode(std::span<const std::uint8_t> syndrome) {
  ClusterState state = validate(syndrome);
  ErasureForest forest = spanning_forest(state);
  return peel(forest, syndrome);
}

}  // namespace compass
