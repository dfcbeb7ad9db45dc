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

#include "compass/blossom.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace compass {

namespace {

// Vertices are 0..n-1, blossoms n..2n-1. Endpoint p of edge k is
// edges[k].u for p = 2k and edges[k].v for p = 2k + 1.
class BlossomSolver {
 public:
  BlossomSolver(std::size_t n, std::span<const MatchingEdge> edges, bool max_cardinality)
      : n_(static_cast<std::int64_t>(n)), edges_(edges), max_cardinality_(max_cardinality) {}

  std::vector<std::int64_t> solve();

 private:
  using I = std::int64_t;

  I slack(I k) const {
    const auto& e = edges_[static_cast<std::size_t>(k)];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }

  void leaves(I b, std::vector<I>& out) const {
    if (b < n_) {
      out.push_back(b);
      return;
    }
    for (I t : childs_[b]) leaves(t, out);
  }

  std::vector<I> leaves(I b) const {
    std::vector<I> out;
    leaves(b, out);
    return out;
  }

  void assign_label(I w, I t, I p);
  I scan_blossom(I v, I w);
  void add_blossom(I base, I k);
  void expand_blossom(I b, bool endstage);
  void augment_blossom(I b, I v);
  void augment_matching(I k);

  I n_;
  std::span<const MatchingEdge> edges_;
  bool max_cardinality_;

  std::vector<I> endpoint_;
  std::vector<std::vector<I>> neighbend_;
  std::vector<I> mate_;
  std::vector<I> label_;
  std::vector<I> labelend_;
  std::vector<I> inblossom_;
  std::vector<I> parent_;
  std::vector<std::vector<I>> childs_;
  std::vector<I> base_;
  std::vector<std::vector<I>> endps_;
  std::vector<I> bestedge_;
  std::vector<std::vector<I>> bestedges_;
  std::vector<std::uint8_t> has_bestedges_;
  std::vector<I> unused_;
  std::vector<I> dual_;
  std::vector<std::uint8_t> allowedge_;
  std::vector<I> queue_;
};

void BlossomSolver::assign_label(I w, I t, I p) {
  for (;;) {
    const I b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, queue_);
      return;
    }
    const I base = base_[b];
    const I m = mate_[base];
    w = endpoint_[m];
    t = 1;
    p = m ^ 1;
  }
}

BlossomSolver::I BlossomSolver::scan_blossom(I v, I w) {
  std::vector<I> path;
  I base = -1;
  while (v != -1 || w != -1) {
    I b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (I b : path) label_[b] = 1;
  return base;
}

void BlossomSolver::add_blossom(I base, I k) {
  const auto& e = edges_[static_cast<std::size_t>(k)];
  I v = e.u;
  I w = e.v;
  const I bb = inblossom_[base];
  I bv = inblossom_[v];
  I bw = inblossom_[w];
  const I b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  auto& path = childs_[b];
  auto& endps = endps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (I leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<I> bestedgeto(static_cast<std::size_t>(2 * n_), -1);
  auto consider = [&](I kk) {
    const auto& ee = edges_[static_cast<std::size_t>(kk)];
    I j = ee.v;
    if (inblossom_[j] == b) j = ee.u;
    const I bj = inblossom_[j];
    if (bj != b && label_[bj] == 1 &&
        (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
      bestedgeto[bj] = kk;
    }
  };
  for (I child : path) {
    if (!has_bestedges_[child]) {
      for (I leaf : leaves(child)) {
        for (I p : neighbend_[leaf]) consider(p / 2);
      }
    } else {
      for (I kk : bestedges_[child]) consider(kk);
    }
    bestedges_[child].clear();
    has_bestedges_[child] = 0;
    bestedge_[child] = -1;
  }
  bestedges_[b].clear();
  for (I kk : bestedgeto) {
    if (kk != -1) bestedges_[b].push_back(kk);
  }
  has_bestedges_[b] = 1;
  bestedge_[b] = -1;
  for (I kk : bestedges_[b]) {
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }
}

void BlossomSolver::expand_blossom(I b, bool endstage) {
  for (I s : childs_[b]) {
    parent_[s] = -1;
    if (s < n_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (I leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = childs_[b];
    const auto& ep = endps_[b];
    const I size = static_cast<I>(ch.size());
    auto child = [&](I j) { return ch[static_cast<std::size_t>(((j % size) + size) % size)]; };
    auto endp = [&](I j) { return ep[static_cast<std::size_t>(((j % size) + size) % size)]; };
    const I entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    I j = static_cast<I>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    I jstep;
    I endptrick;
    if (j & 1) {
      j -= size;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    I p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[endp(j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[endp(j - endptrick) / 2] = 1;
      j += jstep;
      p = endp(j - endptrick) ^ endptrick;
      allowedge_[p / 2] = 1;
      j += jstep;
    }
    I bv = child(j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (child(j) != entrychild) {
      bv = child(j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      I found = -1;
      for (I leaf : leaves(bv)) {
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint_[mate_[base_[bv]]]] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = 0;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void BlossomSolver::augment_blossom(I b, I v) {
  I t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= n_) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const I size = static_cast<I>(ch.size());
  auto at = [size](I j) { return static_cast<std::size_t>(((j % size) + size) % size); };
  const I i = static_cast<I>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  I j = i;
  I jstep;
  I endptrick;
  if (i & 1) {
    j -= size;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = ch[at(j)];
    const I p = ep[at(j - endptrick)] ^ endptrick;
    if (t >= n_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = ch[at(j)];
    if (t >= n_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch[0]];
}

void BlossomSolver::augment_matching(I k) {
  const auto& e = edges_[static_cast<std::size_t>(k)];
  const I starts[2][2] = {{static_cast<I>(e.u), 2 * k + 1}, {static_cast<I>(e.v), 2 * k}};
  for (const auto& start : starts) {
    I s = start[0];
    I p = start[1];
    for (;;) {
      const I bs = inblossom_[s];
      if (bs >= n_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const I t = endpoint_[labelend_[bs]];
      const I bt = inblossom_[t];
      s = endpoint_[labelend_[bt]];
      const I j = endpoint_[labelend_[bt] ^ 1];
      if (bt >= n_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<std::int64_t> BlossomSolver::solve() {
  const std::size_t n = static_cast<std::size_t>(n_);
  const std::size_t m = edges_.size();
  if (m == 0) return std::vector<I>(n, -1);
  I maxweight = 0;
  for (const auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("matching edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("matching edge is a self-loop");
    maxweight = std::max(maxweight, e.weight);
  }
  endpoint_.resize(2 * m);
  neighbend_.assign(n, {});
  for (std::size_t k = 0; k < m; ++k) {
    endpoint_[2 * k] = edges_[k].u;
    endpoint_[2 * k + 1] = edges_[k].v;
    neighbend_[edges_[k].u].push_back(static_cast<I>(2 * k + 1));
    neighbend_[edges_[k].v].push_back(static_cast<I>(2 * k));
  }
  mate_.assign(n, -1);
  label_.assign(2 * n, 0);
  labelend_.assign(2 * n, -1);
  inblossom_.resize(n);
  for (std::size_t v = 0; v < n; ++v) inblossom_[v] = static_cast<I>(v);
  parent_.assign(2 * n, -1);
  childs_.assign(2 * n, {});
  base_.assign(2 * n, -1);
  for (std::size_t v = 0; v < n; ++v) base_[v] = static_cast<I>(v);
  endps_.assign(2 * n, {});
  bestedge_.assign(2 * n, -1);
  bestedges_.assign(2 * n, {});
  has_bestedges_.assign(2 * n, 0);
  unused_.clear();
  for (std::size_t b = n; b < 2 * n; ++b) unused_.push_back(static_cast<I>(b));
  dual_.assign(2 * n, 0);
  for (std::size_t v = 0; v < n; ++v) dual_[v] = maxweight;
  allowedge_.assign(m, 0);

  for (std::size_t stage = 0; stage < n; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (std::size_t b = n; b < 2 * n; ++b) {
      bestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(static_cast<I>(v), 1, -1);
    }
    bool augmented = false;
    for (;;) {
      while (!queue_.empty() && !augmented) {
        const I v = queue_.back();
        queue_.pop_back();
        for (I p : neighbend_[v]) {
          const I k = p / 2;
          const I w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          I kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const I base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const I b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      I delta = 0;
      I deltaedge = -1;
      I deltablossom = -1;
      if (!max_cardinality_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const I d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (std::size_t b = 0; b < 2 * n; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const I ks = slack(bestedge_[b]);
          if (ks % 2 != 0) throw std::logic_error("odd slack between two S-blossoms");
          const I d = ks / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (std::size_t b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = static_cast<I>(b);
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<I>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
      }
      for (std::size_t v = 0; v < n; ++v) {
        const I l = label_[inblossom_[v]];
        if (l == 1) {
          dual_[v] -= delta;
        } else if (l == 2) {
          dual_[v] += delta;
        }
      }
      for (std::size_t b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) {
            dual_[b] += delta;
          } else if (label_[b] == 2) {
            dual_[b] -= delta;
          }
        }
      }
      if (deltatype == 1) break;
      if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        I i = edges_[static_cast<std::size_t>(deltaedge)].u;
        if (label_[inblossom_[i]] == 0) i = edges_[static_cast<std::size_t>(deltaedge)].v;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(edges_[static_cast<std::size_t>(deltaedge)].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (std::size_t b = n; b < 2 * n; ++b) {
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
        expand_blossom(static_cast<I>(b), true);
      }
    }
  }
  std::vector<I> result(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
  }
  return result;
}

}  // namespace

std::vector<std::int64_t> max_weight_matching(std::size_t num_vertices,
                                              std::span<const MatchingEdge> edges,
                                              bool max_cardinality) {
  // Doubling keeps every dual variable integral.
  std::vector<MatchingEdge> doubled(edges.begin(), edges.end());
  for (auto& e : doubled) e.weight *= 2;
  BlossomSolver solver(num_vertices, doubled, max_cardinality);
  return solver.solve();
}

std::vector<std::int64_t> min_weight_perfect_matching(std::size_t num_vertices,
                                                      std::span<const MatchingEdge> edges) {
  std::int64_t top = 0;
  for (const auto& e : edges) {
    if (e.weight < 0) throw std::invalid_argument("negative matching weight");
    top = std::max(top, e.weight);
  }
  std::vector<MatchingEdge> flipped(edges.begin(), edges.end());
  for (auto& e : flipped) e.weight = top + 1 - e.weight;
  auto mate = max_weight_matching(num_vertices, flipped, true);
  for (std::size_t v = 0; v < num_vertices; ++v) {
    if (mate[v] < 0) throw std::invalid_argument("graph has no perfect matching");
  }
  return mate;
}

}  // namespace compass
