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

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "compass/coloring.h"
#include "compass/compass_code.h"
#include "compass/decoder_graph.h"
#include "compass/noise.h"

using namespace compass;

namespace {

std::size_t components_without_boundary(const DecoderGraph& g) {
  const std::size_t n = g.num_bulk_vertices();
  std::vector<int> seen(n, 0);
  std::size_t count = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto id : g.incident(v)) {
        auto w = g.edges[id].u == v ? g.edges[id].v : g.edges[id].u;
        if (!g.is_boundary(w) && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

// Exact odd-parity probability by summing over all 2^k outcomes.
double brute_parity(const std::vector<double>& p) {
  double odd = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << p.size()); ++mask) {
    double prob = 1.0;
    int bits = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const bool on = (mask >> k) & 1u;
      prob *= on ? p[k] : 1 - p[k];
      bits += on;
    }
    if (bits % 2) odd += prob;
  }
  return odd;
}

}  // namespace

TEST(DecoderGraph, BaconShorIsPathWithTripleEdges) {
  auto code = build_code(Coloring(3));
  // Blank cells leave gauge freedom; the Z-error graph still only needs X-stabilizers.
  auto g = build_z_error_graph(code, uniform_map(3, {0.0, 0.0, 0.1}), BoundaryMode::kOpen);
  EXPECT_EQ(g.num_bulk_vertices(), 2u);
  EXPECT_EQ(g.num_vertices(), 4u);
  ASSERT_EQ(g.edges.size(), 3u);
  const double merged = 0.5 * (1 - std::pow(1 - 0.2, 3));
  for (const auto& e : g.edges) {
    EXPECT_EQ(e.payload.size(), 3u);
    EXPECT_NEAR(e.probability, merged, 1e-15);
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> ends;
  for (const auto& e : g.edges) ends.emplace(e.u, e.v);
  EXPECT_EQ(ends, (std::set<std::pair<std::uint32_t, std::uint32_t>>{{0, 2}, {0, 1}, {1, 3}}));
}

TEST(DecoderGraph, SurfaceL3HasNineQubitEdges) {
  auto code = build_code(elongated_coloring(3, 2));
  const double p = 0.1 * 2 / 3;
  auto noise = uniform_map(3, channel_from_bias(0.1, 0.5).rates);
  for (auto g : {build_z_error_graph(code, noise, BoundaryMode::kOpen),
                 build_x_error_graph(code, noise, BoundaryMode::kOpen)}) {
    EXPECT_EQ(g.num_bulk_vertices(), 4u);
    EXPECT_EQ(g.num_boundary, 2u);
    // Nine qubit edges; the two boundary qubits of each weight-4 boundary
    // stabilizer share both endpoints and merge, leaving seven.
    std::size_t qubit_edges = 0;
    std::size_t merged = 0;
    for (const auto& e : g.edges) {
      qubit_edges += e.payload.size();
      if (e.payload.size() == 2) {
        ++merged;
        EXPECT_TRUE(g.is_boundary(e.v));
        EXPECT_NEAR(e.probability, 2 * p * (1 - p), 1e-15);
      } else {
        EXPECT_EQ(e.payload.size(), 1u);
        EXPECT_NEAR(e.probability, p, 1e-15);
      }
    }
    EXPECT_EQ(qubit_edges, 9u);
    EXPECT_EQ(merged, 2u);
    EXPECT_EQ(g.edges.size(), 7u);
  }
}

TEST(DecoderGraph, ShorXGraphIsRepetitionCodes) {
  auto code = build_code(elongated_coloring(3, 1));
  auto g = build_x_error_graph(code, uniform_map(3, {0.1, 0.0, 0.0}), BoundaryMode::kOpen);
  EXPECT_EQ(g.num_bulk_vertices(), 6u);
  EXPECT_EQ(components_without_boundary(g), 3u);
  EXPECT_EQ(g.edges.size(), 9u);
}

TEST(DecoderGraph, MergedProbabilityMatchesConvolution) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (std::size_t k = 1; k <= 6; ++k) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> p(k);
      for (auto& x : p) x = u(rng);
      EXPECT_NEAR(merged_probability(p), brute_parity(p), 1e-14);
    }
    std::vector<double> same(k, 0.07);
    EXPECT_NEAR(merged_probability(same), 0.5 * (1 - std::pow(1 - 0.14, double(k))), 1e-15);
  }
}

TEST(DecoderGraph, PeriodicModeHasOneSink) {
  auto code = build_code(elongated_coloring(5, 2));
  auto noise = uniform_map(5, channel_from_bias(0.1, 0.5).rates);
  auto g = build_z_error_graph(code, noise, BoundaryMode::kPeriodic);
  EXPECT_EQ(g.num_boundary, 1u);
  auto open = build_z_error_graph(code, noise, BoundaryMode::kOpen);
  EXPECT_EQ(g.edges.size(), open.edges.size());
}

TEST(DecoderGraph, RejectsToricAndBadNoise) {
  auto toric = build_code(elongated_coloring(4, 2, Topology::kToric));
  EXPECT_THROW(build_z_error_graph(toric, uniform_map(4, {}), BoundaryMode::kOpen),
               std::invalid_argument);
  auto code = build_code(elongated_coloring(3, 2));
  EXPECT_THROW(build_z_error_graph(code, uniform_map(4, {}), BoundaryMode::kOpen),
               std::invalid_argument);
  EXPECT_THROW(build_z_error_graph(code, uniform_map(3, {0.0, 0.0, 0.5}), BoundaryMode::kOpen),
               std::invalid_argument);
}

TEST(DecoderGraph, ZeroRatesGetTheFloor) {
  auto code = build_code(elongated_coloring(3, 2));
  auto g = build_x_error_graph(code, uniform_map(3, {0.0, 0.0, 0.2}), BoundaryMode::kOpen);
  for (const auto& e : g.edges) EXPECT_EQ(e.probability, kMinEdgeProbability);
}

TEST(DecoderGraph, PayloadRoundTrip) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    auto code = build_code(shor_density_coloring(7, 0.4, rng));
    auto noise = uniform_map(7, channel_from_bias(0.1, 1.0).rates);
    for (auto g : {build_z_error_graph(code, noise, BoundaryMode::kOpen),
                   build_x_error_graph(code, noise, BoundaryMode::kOpen)}) {
      std::vector<int> seen(49, 0);
      for (std::size_t id = 0; id < g.edges.size(); ++id) {
        for (auto q : g.edges[id].payload) {
          ++seen[q];
          EXPECT_EQ(g.qubit_edge[q], id);
        }
      }
      for (int s : seen) EXPECT_EQ(s, 1);
    }
  }
}

TEST(DecoderGraph, HandshakeAndSyndromes) {
  auto code = build_code(elongated_coloring(5, 3));
  auto g = build_z_error_graph(code, uniform_map(5, {0.0, 0.0, 0.1}), BoundaryMode::kOpen);
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::uint8_t> flags(g.edges.size());
    int boundary_parity = 0;
    for (std::size_t id = 0; id < flags.size(); ++id) {
      flags[id] = coin(rng);
      if (flags[id] && (g.is_boundary(g.edges[id].u) || g.is_boundary(g.edges[id].v))) {
        boundary_parity ^= 1;
      }
    }
    auto s = syndrome_of(g, flags);
    int marked = 0;
    for (std::size_t v = 0; v < s.size(); ++v) {
      marked += s[v];
      if (g.is_boundary(static_cast<std::uint32_t>(v))) {
        EXPECT_EQ(s[v], 0);
      }
    }
    EXPECT_EQ(marked % 2, boundary_parity);
  }
  EXPECT_EQ(syndrome_of(g, std::vector<std::uint8_t>(g.edges.size(), 0)),
            Syndrome(g.num_vertices(), 0));
}

TEST(DecoderGraph, SingleBulkEdgeMarksItsEnds) {
  auto code = build_code(elongated_coloring(5, 2));
  auto g = build_z_error_graph(code, uniform_map(5, {0.0, 0.0, 0.1}), BoundaryMode::kOpen);
  for (std::uint32_t id = 0; id < g.edges.size(); ++id) {
    const auto& e = g.edges[id];
    auto s = syndrome_of_edges(g, std::vector<std::uint32_t>{id});
    if (!g.is_boundary(e.u) && !g.is_boundary(e.v)) {
      EXPECT_EQ(std::count(s.begin(), s.end(), 1), 2);
      EXPECT_EQ(s[e.u], 1);
      EXPECT_EQ(s[e.v], 1);
    }
  }
}

TEST(DecoderGraph, LogicalColumnIsUndetectedAndCrossesSeam) {
  for (std::size_t ell : {1, 2, 3, 4}) {
    const std::size_t L = 7;
    auto code = build_code(elongated_coloring(L, ell));
    auto noise = uniform_map(L, {0.05, 0.0, 0.05});
    for (auto mode : {BoundaryMode::kOpen, BoundaryMode::kPeriodic}) {
      auto gz = build_z_error_graph(code, noise, mode);
      auto gx = build_x_error_graph(code, noise, mode);
      for (std::size_t line = 0; line < L; ++line) {
        // Z on a full column is a logical Z; X on a full row is a logical X.
        std::vector<std::uint8_t> fz(gz.edges.size(), 0);
        std::vector<std::uint8_t> fx(gx.edges.size(), 0);
        for (std::size_t k = 0; k < L; ++k) {
          fz[gz.qubit_edge[k * L + line]] ^= 1;
          fx[gx.qubit_edge[line * L + k]] ^= 1;
        }
        EXPECT_EQ(syndrome_of(gz, fz), Syndrome(gz.num_vertices(), 0));
        EXPECT_EQ(syndrome_of(gx, fx), Syndrome(gx.num_vertices(), 0));
        EXPECT_TRUE(crosses_seam(gz, fz));
        EXPECT_TRUE(crosses_seam(gx, fx));
      }
    }
  }
}

TEST(DecoderGraph, StabilizerCyclesNeverCrossSeam) {
  std::mt19937_64 rng(21);
  for (std::size_t L : {3, 4, 5}) {
    for (int rep = 0; rep < 10; ++rep) {
      auto code = build_code(shor_density_coloring(L, 0.5, rng));
      auto noise = uniform_map(L, {0.05, 0.0, 0.05});
      for (std::size_t line = 0; line < L; ++line) {
        for (auto type : {ErrorType::kZ, ErrorType::kX}) {
          auto g = build_decoder_graph(code, noise, type, BoundaryMode::kOpen, line);
          // The other stabilizer type acts on this graph's errors as a cycle.
          const auto& cycles = type == ErrorType::kZ ? code.z_stabilizers : code.x_stabilizers;
          for (const auto& cyc : cycles) {
            std::vector<std::uint8_t> f(g.edges.size(), 0);
            for (auto q : cyc) f[g.qubit_edge[q]] ^= 1;
            EXPECT_EQ(syndrome_of(g, f), Syndrome(g.num_vertices(), 0));
            EXPECT_FALSE(crosses_seam(g, f));
          }
        }
      }
    }
  }
}

TEST(DecoderGraph, SeamChoiceDoesNotChangeClosedChainClass) {
  std::mt19937_64 rng(17);
  const std::size_t L = 5;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t ell : {1, 2, 3}) {
    auto code = build_code(elongated_coloring(L, ell));
    auto noise = uniform_map(L, {0.0, 0.0, 0.1});
    std::vector<DecoderGraph> graphs;
    for (std::size_t line = 0; line < L; ++line) {
      graphs.push_back(build_decoder_graph(code, noise, ErrorType::kZ, BoundaryMode::kOpen, line));
    }
    for (int rep = 0; rep < 300; ++rep) {
      // Random product of Z-stabilizers, times a logical column half the time.
      std::vector<std::uint8_t> qubits(L * L, 0);
      for (const auto& s : code.z_stabilizers) {
        if (coin(rng)) {
          for (auto q : s) qubits[q] ^= 1;
        }
      }
      const bool logical = coin(rng);
      if (logical) {
        const std::size_t col = rng() % L;
        for (std::size_t i = 0; i < L; ++i) qubits[i * L + col] ^= 1;
      }
      for (const auto& g : graphs) {
        std::vector<std::uint8_t> f(g.edges.size(), 0);
        for (std::size_t q = 0; q < qubits.size(); ++q) {
          if (qubits[q]) f[g.qubit_edge[q]] ^= 1;
        }
        ASSERT_EQ(syndrome_of(g, f), Syndrome(g.num_vertices(), 0));
        EXPECT_EQ(crosses_seam(g, f), logical);
      }
    }
  }
}

TEST(SpacetimeGraph, Counting) {
  const std::size_t L = 5;
  auto code = build_code(elongated_coloring(L, 2));
  auto noise = uniform_map(L, channel_from_bias(0.03, 0.5).rates);
  auto g2 = build_z_error_graph(code, noise, BoundaryMode::kPeriodic);
  auto rates = measurement_rates(code.x_stabilizers, 0.03);
  auto g3 = build_spacetime_graph(g2, L, rates);
  const std::size_t S = code.x_stabilizers.size();
  EXPECT_EQ(g3.num_vertices(), (L + 1) * S + 1);
  EXPECT_EQ(g3.edges.size(), (L + 1) * g2.edges.size() + L * S);
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto& e = g3.edges[static_cast<std::size_t>(g3.time_edge[t * S + s])];
      EXPECT_TRUE(e.timelike);
      EXPECT_NEAR(e.probability, 0.03 * code.x_stabilizers[s].size() / 4.0, 1e-15);
      if (code.x_stabilizers[s].size() == 4) {
        EXPECT_NEAR(e.probability, 0.03, 1e-15);
      }
    }
  }
  EXPECT_THROW(build_spacetime_graph(g2, 0, rates), std::invalid_argument);
}

TEST(SpacetimeGraph, ZeroRatesDropTimeEdges) {
  auto code = build_code(elongated_coloring(5, 2));
  auto noise = uniform_map(5, {0.0, 0.0, 0.05});
  auto g2 = build_z_error_graph(code, noise, BoundaryMode::kOpen);
  std::vector<double> zero(code.x_stabilizers.size(), 0.0);
  auto g3 = build_spacetime_graph(g2, 1, zero);
  EXPECT_EQ(g3.edges.size(), 2 * g2.edges.size());
  for (auto t : g3.time_edge) EXPECT_EQ(t, -1);
}

TEST(SpacetimeGraph, ProjectSample) {
  const std::size_t L = 5;
  auto code = build_code(elongated_coloring(L, 2));
  auto noise = uniform_map(L, channel_from_bias(0.1, 0.5).rates);
  attach_measurement_rates(noise, code, 0.1, 0.1);
  auto g2 = build_z_error_graph(code, noise, BoundaryMode::kOpen);
  auto g3 = build_spacetime_graph(g2, 3, noise.x_measurement);
  std::mt19937_64 rng(3);
  auto sample = sample_pauli(noise, 4, rng);
  auto flags = project_sample(g3, sample);
  std::size_t expected = 0;
  for (auto b : sample.z_flips) expected += b;
  for (auto b : sample.x_measurement_flips) expected += b;
  std::size_t got = 0;
  for (auto b : flags) got += b;
  EXPECT_EQ(got, expected);
  EXPECT_THROW(project_sample(g2, sample), std::invalid_argument);
}

TEST(DecoderGraph, DumpFormat) {
  auto code = build_code(elongated_coloring(3, 2));
  auto g = build_z_error_graph(code, uniform_map(3, {0.0, 0.0, 0.1}), BoundaryMode::kOpen);
  auto text = g.dump();
  EXPECT_NE(text.find("vertex 0 stabilizer\n"), std::string::npos);
  EXPECT_NE(text.find("vertex 4 north\n"), std::string::npos);
  EXPECT_NE(text.find("vertex 5 south\n"), std::string::npos);
  EXPECT_NE(text.find("edge 0 "), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6 + 7);
}
