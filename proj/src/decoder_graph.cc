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

#include "compass/decoder_graph.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace compass {

double merged_probability(std::span<const double> probabilities) {
  double prod = 1.0;
  for (double p : probabilities) prod *= 1.0 - 2.0 * p;
  return 0.5 * (1.0 - prod);
}

void DecoderGraph::finalize() {
  const std::size_t n = num_vertices();
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  adjacency_.assign(offsets_[n], 0);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t id = 0; id < edges.size(); ++id) {
    adjacency_[fill[edges[id].u]++] = id;
    adjacency_[fill[edges[id].v]++] = id;
  }
}

std::string DecoderGraph::dump() const {
  std::ostringstream out;
  out.precision(12);
  for (std::uint32_t v = 0; v < num_vertices(); ++v) {
    out << "vertex " << v << ' ';
    if (!is_boundary(v)) {
      out << "stabilizer";
    } else if (mode == BoundaryMode::kPeriodic) {
      out << "boundary";
    } else if (v == num_bulk_vertices()) {
      out << (type == ErrorType::kZ ? "north" : "west");
    } else {
      out << (type == ErrorType::kZ ? "south" : "east");
    }
    out << '\n';
  }
  for (std::size_t id = 0; id < edges.size(); ++id) {
    const auto& e = edges[id];
    out << "edge " << id << ' ' << e.u << ' ' << e.v << ' ' << e.probability << ' '
        << (e.timelike ? 'm' : 'q');
    for (std::size_t k = 0; k < e.payload.size(); ++k) {
      out << (k == 0 ? "" : ",") << e.payload[k];
    }
    out << '@' << e.layer;
    if (e.seam) out << " seam";
    out << '\n';
  }
  return out.str();
}

namespace {

double decoder_probability(double p) {
  if (!(p < 0.5)) {
    throw std::invalid_argument("edge failure probability " + std::to_string(p) +
                                " is not below 1/2");
  }
  return std::max(p, kMinEdgeProbability);
}

}  // namespace

DecoderGraph build_decoder_graph(const CompassCode& code, const NoiseMap& noise, ErrorType type,
                                 BoundaryMode mode, std::size_t seam_line) {
  if (code.topology != Topology::kPlanar) {
    throw std::invalid_argument("decoder graphs are only defined for planar codes");
  }
  if (noise.L() != code.L) {
    throw std::invalid_argument("noise map and code have different lattice sizes");
  }
  const std::size_t L = code.L;
  if (seam_line >= L) {
    throw std::invalid_argument("seam line outside the lattice");
  }
  const auto& stabs = type == ErrorType::kZ ? code.x_stabilizers : code.z_stabilizers;
  const std::size_t S = stabs.size();
  const std::size_t nq = code.num_qubits();

  DecoderGraph g;
  g.type = type;
  g.mode = mode;
  g.L = L;
  g.num_qubits = nq;
  g.num_stabilizers = S;
  g.num_layers = 1;
  g.num_boundary = mode == BoundaryMode::kOpen ? 2 : 1;

  std::vector<std::uint32_t> first(nq, UINT32_MAX);
  std::vector<std::uint32_t> second(nq, UINT32_MAX);
  for (std::uint32_t s = 0; s < S; ++s) {
    for (auto q : stabs[s]) {
      if (first[q] == UINT32_MAX) {
        first[q] = s;
      } else if (second[q] == UINT32_MAX) {
        second[q] = s;
      } else {
        throw std::invalid_argument("qubit " + std::to_string(q) +
                                    " lies in more than two stabilizers of one type");
      }
    }
  }

  const auto near_boundary = static_cast<std::uint32_t>(S);
  const auto far_boundary =
      static_cast<std::uint32_t>(mode == BoundaryMode::kOpen ? S + 1 : S);

  std::unordered_map<std::uint64_t, std::uint32_t> by_key;
  std::vector<std::vector<double>> member_probabilities;
  g.qubit_edge.assign(nq, 0);
  for (std::uint32_t q = 0; q < nq; ++q) {
    const std::size_t row = q / L;
    const std::size_t col = q % L;
    // Distance across the graph runs along rows for Z errors and columns for X errors.
    const std::size_t across = type == ErrorType::kZ ? row : col;
    std::uint32_t u = first[q];
    std::uint32_t v = second[q];
    if (u == UINT32_MAX) {
      throw std::invalid_argument("qubit " + std::to_string(q) +
                                  " is checked by no stabilizer of the decoding type");
    }
    if (v == UINT32_MAX) {
      if (across == 0) {
        v = near_boundary;
      } else if (across == L - 1) {
        v = far_boundary;
      } else {
        throw std::invalid_argument("interior qubit " + std::to_string(q) +
                                    " is checked by a single stabilizer");
      }
    }
    if (u > v) std::swap(u, v);
    const bool seam = across == seam_line;
    std::uint64_t key = (static_cast<std::uint64_t>(u) << 33) | (static_cast<std::uint64_t>(v) << 1) |
                        (seam ? 1u : 0u);
    const PauliRates& r = noise.rates(q);
    double p = type == ErrorType::kZ ? r.z_marginal() : r.x_marginal();
    auto it = by_key.find(key);
    std::uint32_t id;
    if (it == by_key.end()) {
      id = static_cast<std::uint32_t>(g.edges.size());
      by_key.emplace(key, id);
      GraphEdge e;
      e.u = u;
      e.v = v;
      e.seam = seam;
      g.edges.push_back(std::move(e));
      member_probabilities.emplace_back();
    } else {
      id = it->second;
    }
    g.edges[id].payload.push_back(q);
    member_probabilities[id].push_back(p);
    g.qubit_edge[q] = id;
  }
  for (std::size_t id = 0; id < g.edges.size(); ++id) {
    g.edges[id].probability = decoder_probability(merged_probability(member_probabilities[id]));
  }
  g.finalize();
  return g;
}

void reweight(DecoderGraph& graph, const NoiseMap& noise) {
  if (graph.num_layers != 1) {
    throw std::invalid_argument("only single-layer graphs can be reweighted");
  }
  if (noise.L() != graph.L || noise.num_qubits() != graph.num_qubits) {
    throw std::invalid_argument("noise map and decoder graph have different lattice sizes");
  }
  std::vector<double> members;
  for (auto& e : graph.edges) {
    members.clear();
    for (auto q : e.payload) {
      const PauliRates& r = noise.rates(q);
      members.push_back(graph.type == ErrorType::kZ ? r.z_marginal() : r.x_marginal());
    }
    e.probability = decoder_probability(merged_probability(members));
  }
}

DecoderGraph build_z_error_graph(const CompassCode& code, const NoiseMap& noise,
                                 BoundaryMode mode) {
  return build_decoder_graph(code, noise, ErrorType::kZ, mode, code.L / 2);
}

DecoderGraph build_x_error_graph(const CompassCode& code, const NoiseMap& noise,
                                 BoundaryMode mode) {
  return build_decoder_graph(code, noise, ErrorType::kX, mode, code.L / 2);
}

DecoderGraph build_spacetime_graph(const DecoderGraph& graph2d, std::size_t rounds,
                                   std::span<const double> measurement_rates) {
  if (rounds == 0) {
    throw std::invalid_argument("space-time graphs need at least one faulty round");
  }
  if (graph2d.num_layers != 1) {
    throw std::invalid_argument("space-time graphs are built from a single-layer graph");
  }
  const std::size_t S = graph2d.num_stabilizers;
  if (measurement_rates.size() != S) {
    throw std::invalid_argument("need one measurement rate per stabilizer");
  }
  const std::size_t layers = rounds + 1;
  DecoderGraph g;
  g.type = graph2d.type;
  g.mode = graph2d.mode;
  g.L = graph2d.L;
  g.num_qubits = graph2d.num_qubits;
  g.num_stabilizers = S;
  g.num_layers = layers;
  g.num_boundary = graph2d.num_boundary;
  const auto bulk = static_cast<std::uint32_t>(S * layers);
  auto lift = [&](std::uint32_t v, std::size_t t) -> std::uint32_t {
    if (v >= S) return bulk + (v - static_cast<std::uint32_t>(S));
    return static_cast<std::uint32_t>(t * S + v);
  };
  g.edges.reserve(layers * graph2d.edges.size() + rounds * S);
  g.qubit_edge.assign(layers * g.num_qubits, 0);
  for (std::size_t t = 0; t < layers; ++t) {
    const auto base = static_cast<std::uint32_t>(g.edges.size());
    for (const auto& e : graph2d.edges) {
      GraphEdge copy = e;
      copy.u = lift(e.u, t);
      copy.v = lift(e.v, t);
      copy.layer = static_cast<std::uint32_t>(t);
      g.edges.push_back(std::move(copy));
    }
    for (std::size_t q = 0; q < g.num_qubits; ++q) {
      g.qubit_edge[t * g.num_qubits + q] = base + graph2d.qubit_edge[q];
    }
  }
  g.time_edge.assign(rounds * S, -1);
  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::uint32_t s = 0; s < S; ++s) {
      double rate = measurement_rates[s];
      if (rate == 0.0) continue;
      GraphEdge e;
      e.u = static_cast<std::uint32_t>(t * S + s);
      e.v = static_cast<std::uint32_t>((t + 1) * S + s);
      e.probability = decoder_probability(rate);
      e.timelike = true;
      e.layer = static_cast<std::uint32_t>(t);
      e.payload = {s};
      g.time_edge[t * S + s] = static_cast<std::int32_t>(g.edges.size());
      g.edges.push_back(std::move(e));
    }
  }
  g.finalize();
  return g;
}

Syndrome syndrome_of(const DecoderGraph& graph, std::span<const std::uint8_t> edge_flags) {
  Syndrome marks(graph.num_vertices(), 0);
  for (std::size_t id = 0; id < graph.edges.size(); ++id) {
    if (!edge_flags[id]) continue;
    marks[graph.edges[id].u] ^= 1;
    marks[graph.edges[id].v] ^= 1;
  }
  for (std::size_t v = graph.num_bulk_vertices(); v < marks.size(); ++v) marks[v] = 0;
  return marks;
}

Syndrome syndrome_of_edges(const DecoderGraph& graph, std::span<const std::uint32_t> edges) {
  std::vector<std::uint8_t> flags(graph.edges.size(), 0);
  for (auto id : edges) flags[id] ^= 1;
  return syndrome_of(graph, flags);
}

std::vector<std::uint8_t> project_sample(const DecoderGraph& graph, const PauliSample& sample) {
  if (sample.num_qubits != graph.num_qubits) {
    throw std::invalid_argument("sample and graph disagree on the qubit count");
  }
  if (sample.rounds != graph.num_layers) {
    throw std::invalid_argument("sample has " + std::to_string(sample.rounds) +
                                " rounds but the graph has " + std::to_string(graph.num_layers) +
                                " layers");
  }
  std::vector<std::uint8_t> flags(graph.edges.size(), 0);
  const auto& data = graph.type == ErrorType::kZ ? sample.z_flips : sample.x_flips;
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data[k]) flags[graph.qubit_edge[k]] ^= 1;
  }
  if (graph.num_layers > 1) {
    const auto& meas =
        graph.type == ErrorType::kZ ? sample.x_measurement_flips : sample.z_measurement_flips;
    if (meas.size() != graph.time_edge.size()) {
      throw std::invalid_argument("measurement flips do not match the graph's rounds");
    }
    for (std::size_t k = 0; k < meas.size(); ++k) {
      if (!meas[k]) continue;
      if (graph.time_edge[k] < 0) {
        throw std::logic_error("measurement flip on a stabilizer with zero failure rate");
      }
      flags[static_cast<std::size_t>(graph.time_edge[k])] ^= 1;
    }
  }
  return flags;
}

bool crosses_seam(const DecoderGraph& graph, std::span<const std::uint8_t> edge_flags) {
  bool parity = false;
  for (std::size_t id = 0; id < graph.edges.size(); ++id) {
    if (edge_flags[id] && graph.edges[id].seam) parity = !parity;
  }
  return parity;
}

}  // namespace compass
