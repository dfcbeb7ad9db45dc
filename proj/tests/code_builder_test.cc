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
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "compass/coloring.h"
#include "compass/compass_code.h"
#include "compass/noise.h"

using namespace compass;

namespace {

using Support = std::vector<std::uint32_t>;

std::multiset<std::size_t> weights(const std::vector<QubitSupport>& stabs) {
  std::multiset<std::size_t> out;
  for (const auto& s : stabs) out.insert(s.size());
  return out;
}

// Independent construction: columns j and j+1 of a row pair share a
// stabilizer unless the plaquette between them cuts it. Connected groups of
// columns are found by flood fill over an explicit adjacency matrix.
std::set<Support> oracle_stabilizers(const Coloring& c, bool x_type) {
  const std::size_t L = c.L();
  std::set<Support> out;
  for (std::size_t pair = 0; pair + 1 < L; ++pair) {
    std::vector<std::vector<bool>> joined(L, std::vector<bool>(L, false));
    for (std::size_t k = 0; k + 1 < L; ++k) {
      const Plaquette cell = x_type ? c.at(pair, k) : c.at(k, pair);
      const Plaquette cuts = x_type ? Plaquette::kBlue : Plaquette::kRed;
      if (cell != cuts) joined[k][k + 1] = joined[k + 1][k] = true;
    }
    std::vector<int> group(L, -1);
    int next = 0;
    for (std::size_t s = 0; s < L; ++s) {
      if (group[s] >= 0) continue;
      std::vector<std::size_t> stack{s};
      group[s] = next;
      while (!stack.empty()) {
        auto a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < L; ++b) {
          if (joined[a][b] && group[b] < 0) {
            group[b] = next;
            stack.push_back(b);
          }
        }
      }
      ++next;
    }
    for (int g = 0; g < next; ++g) {
      Support s;
      for (std::size_t k = 0; k < L; ++k) {
        if (group[k] != g) continue;
        if (x_type) {
          s.push_back(static_cast<std::uint32_t>(pair * L + k));
          s.push_back(static_cast<std::uint32_t>((pair + 1) * L + k));
        } else {
          s.push_back(static_cast<std::uint32_t>(k * L + pair));
          s.push_back(static_cast<std::uint32_t>(k * L + pair + 1));
        }
      }
      std::sort(s.begin(), s.end());
      out.insert(s);
    }
  }
  return out;
}

std::set<Support> as_set(const std::vector<QubitSupport>& stabs) {
  return {stabs.begin(), stabs.end()};
}

Coloring random_coloring(std::size_t L, std::mt19937_64& rng, bool allow_blank) {
  Coloring c(L);
  std::uniform_int_distribution<int> pick(allow_blank ? 0 : 1, 2);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    for (std::size_t j = 0; j + 1 < L; ++j) c.set(i, j, static_cast<Plaquette>(pick(rng)));
  }
  return c;
}

}  // namespace

TEST(BuildCode, ShorL3) {
  auto code = build_code(elongated_coloring(3, 1));
  EXPECT_EQ(weights(code.x_stabilizers), (std::multiset<std::size_t>{6, 6}));
  EXPECT_EQ(weights(code.z_stabilizers), (std::multiset<std::size_t>{2, 2, 2, 2, 2, 2}));
  EXPECT_TRUE(validate_code(code).ok());
}

TEST(BuildCode, CheckerboardL3IsRotatedSurfaceCode) {
  Coloring c(3);
  c.set(0, 0, Plaquette::kRed);
  c.set(1, 1, Plaquette::kRed);
  c.set(0, 1, Plaquette::kBlue);
  c.set(1, 0, Plaquette::kBlue);
  EXPECT_EQ(c, elongated_coloring(3, 2));
  auto code = build_code(c);
  std::vector<std::size_t> xw;
  std::vector<std::size_t> zw;
  for (const auto& s : code.x_stabilizers) xw.push_back(s.size());
  for (const auto& s : code.z_stabilizers) zw.push_back(s.size());
  EXPECT_EQ(xw, (std::vector<std::size_t>{4, 2, 2, 4}));
  EXPECT_EQ(zw, (std::vector<std::size_t>{2, 4, 4, 2}));
  EXPECT_EQ(code.x_stabilizers.size() + code.z_stabilizers.size(), 8u);
  EXPECT_TRUE(validate_code(code).ok());
}

TEST(BuildCode, BlankIsBaconShor) {
  auto code = build_code(Coloring(3));
  EXPECT_FALSE(code.subspace);
  EXPECT_EQ(weights(code.x_stabilizers), (std::multiset<std::size_t>{6, 6}));
  EXPECT_EQ(weights(code.z_stabilizers), (std::multiset<std::size_t>{6, 6}));
  EXPECT_TRUE(validate_code(code).ok());
}

TEST(BuildCode, RejectsTinyLattice) {
  EXPECT_THROW(Coloring(1), std::invalid_argument);
  EXPECT_THROW(elongated_coloring(1, 2), std::invalid_argument);
}

TEST(BuildCode, MatchesSegmentOracleOnRandomColorings) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 2 + trial % 7;
    auto c = random_coloring(L, rng, trial % 2 == 0);
    auto code = build_code(c);
    EXPECT_EQ(as_set(code.x_stabilizers), oracle_stabilizers(c, true));
    EXPECT_EQ(as_set(code.z_stabilizers), oracle_stabilizers(c, false));
    auto report = validate_code(code);
    EXPECT_TRUE(report.ok()) << (report.ok() ? "" : report.violations.front());
    if (c.is_subspace()) {
      EXPECT_EQ(code.x_stabilizers.size() + code.z_stabilizers.size(), L * L - 1);
    }
    EXPECT_EQ(build_code(c).x_stabilizers, code.x_stabilizers);
  }
}

TEST(BuildCode, SurfaceCodeBulkWeightsAreFour) {
  const std::size_t L = 7;
  auto code = build_code(elongated_coloring(L, 2));
  auto interior = [L](const QubitSupport& s) {
    return std::all_of(s.begin(), s.end(), [L](std::uint32_t q) {
      std::size_t i = q / L;
      std::size_t j = q % L;
      return i > 0 && j > 0 && i + 1 < L && j + 1 < L;
    });
  };
  for (const auto* stabs : {&code.x_stabilizers, &code.z_stabilizers}) {
    for (const auto& s : *stabs) {
      if (interior(s)) {
        EXPECT_EQ(s.size(), 4u);
      }
      EXPECT_LE(s.size(), 4u);
    }
  }
}

TEST(BuildCode, ElongatedBulkZWeight) {
  auto code = build_code(elongated_coloring(7, 3));
  std::size_t max_z = 0;
  for (const auto& s : code.z_stabilizers) max_z = std::max(max_z, s.size());
  EXPECT_EQ(max_z, 6u);
  for (const auto& s : code.x_stabilizers) EXPECT_LE(s.size(), 4u);
}

TEST(ValidateCode, FlagsOddOverlap) {
  CompassCode code;
  code.L = 2;
  code.x_stabilizers = {{0, 1}};
  code.z_stabilizers = {{1, 3}};
  auto report = validate_code(code);
  ASSERT_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) found |= v.find("odd overlap") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ValidateCode, SurfaceL5Count) {
  auto code = build_code(elongated_coloring(5, 2));
  EXPECT_EQ(code.x_stabilizers.size() + code.z_stabilizers.size(), 24u);
  EXPECT_TRUE(validate_code(code).ok());
}

TEST(Colorings, Elongated) {
  auto shor = elongated_coloring(6, 1);
  EXPECT_EQ(shor.count(Plaquette::kRed), 25u);
  auto surface = elongated_coloring(6, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(surface.at(i, j), (i + j) % 2 == 0 ? Plaquette::kRed : Plaquette::kBlue);
    }
  }
  EXPECT_THROW(elongated_coloring(5, 0), std::invalid_argument);
}

TEST(Colorings, SurfaceDensityLimits) {
  std::mt19937_64 rng(3);
  // q = 1 gives the checkerboard with Blue on even cells, the mirror image of
  // elongated_coloring(L, 2); both are rotated surface codes.
  auto full = surface_density_coloring(9, 1.0, rng);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_EQ(full.at(i, j), (i + j) % 2 == 0 ? Plaquette::kBlue : Plaquette::kRed);
    }
  }
  auto code = build_code(full);
  EXPECT_TRUE(validate_code(code).ok());
  for (const auto* stabs : {&code.x_stabilizers, &code.z_stabilizers}) {
    for (const auto& s : *stabs) EXPECT_LE(s.size(), 4u);
  }
  EXPECT_EQ(to_text(surface_density_coloring(9, 0.0, rng)), to_text(elongated_coloring(9, 1)));
}

TEST(Colorings, SurfaceDensityBlueCount) {
  std::mt19937_64 rng(5);
  const std::size_t L = 41;
  const std::size_t side = L - 1;
  const std::size_t even_cells = (side * side + 1) / 2;
  double total = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    auto c = surface_density_coloring(L, 0.5, rng);
    total += static_cast<double>(c.count(Plaquette::kBlue));
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        if ((i + j) % 2 == 1) {
          ASSERT_EQ(c.at(i, j), Plaquette::kRed);
        }
      }
    }
  }
  const double mean = total / reps;
  const double expected = even_cells / 2.0;
  const double sigma = std::sqrt(even_cells * 0.25 / reps);
  EXPECT_NEAR(mean, expected, 4 * sigma);
}

TEST(Colorings, ShorDensityLimits) {
  std::mt19937_64 rng(7);
  auto all_blue = shor_density_coloring(6, 1.0, rng);
  EXPECT_EQ(all_blue.count(Plaquette::kBlue), 25u);
  auto code = build_code(all_blue);
  for (const auto& s : code.x_stabilizers) EXPECT_EQ(s.size(), 2u);
  for (const auto& s : code.z_stabilizers) EXPECT_EQ(s.size(), 12u);
  EXPECT_EQ(shor_density_coloring(6, 0.0, rng), elongated_coloring(6, 1));
}

TEST(Colorings, ShorDensityMaxWeightGrowsSlowly) {
  std::mt19937_64 rng(9);
  auto mean_max_z = [&](std::size_t L) {
    double total = 0.0;
    const int reps = 40;
    for (int r = 0; r < reps; ++r) {
      auto code = build_code(shor_density_coloring(L, 0.5, rng));
      std::size_t m = 0;
      for (const auto& s : code.z_stabilizers) m = std::max(m, s.size());
      total += static_cast<double>(m);
    }
    return total / reps;
  };
  const double small = mean_max_z(16);
  const double large = mean_max_z(64);
  // Runs of Red cells in L columns of length L: max run ~ log2(L^2).
  EXPECT_GT(large, small);
  EXPECT_LT(large / small, 2.0);
  EXPECT_NEAR(large / 2.0, std::log2(64.0 * 64.0), 4.0);
}

TEST(Colorings, TailoredLimits) {
  std::mt19937_64 rng(1);
  const double p_tot = 0.2;
  auto uniform = uniform_map(6, {p_tot / 2, 0.0, p_tot / 2});
  EXPECT_EQ(tailored_coloring(uniform, p_tot, rng).count(Plaquette::kBlue), 25u);
  auto none = uniform_map(6, {p_tot / 2, 0.0, 0.0});
  EXPECT_EQ(tailored_coloring(none, p_tot, rng).count(Plaquette::kRed), 25u);
  EXPECT_THROW(tailored_coloring(uniform, 0.0, rng), std::invalid_argument);
}

TEST(Colorings, TailoredFollowsLinearProfile) {
  std::mt19937_64 rng(2);
  const std::size_t L = 9;
  const double w = 0.25;
  auto noise = linear_profile_map(L, 0.2, w);
  std::vector<double> blue(L - 1, 0.0);
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    auto c = tailored_coloring(noise, 0.2, rng);
    for (std::size_t i = 0; i + 1 < L; ++i) {
      for (std::size_t j = 0; j + 1 < L; ++j) blue[j] += c.at(i, j) == Plaquette::kBlue;
    }
  }
  for (std::size_t j = 0; j + 1 < L; ++j) {
    const double x = static_cast<double>(j) / L;
    const double expected = w * x + (1 - w) * (1 - x);
    const double n = reps * (L - 1.0);
    const double sigma = std::sqrt(expected * (1 - expected) / n);
    EXPECT_NEAR(blue[j] / n, expected, 5 * sigma + 1e-12) << "column " << j;
  }
}

TEST(Colorings, TextRoundTrip) {
  std::mt19937_64 rng(4);
  for (bool blank : {false, true}) {
    auto c = random_coloring(7, rng, blank);
    EXPECT_EQ(parse_coloring(to_text(c)), c);
  }
  auto toric = elongated_coloring(6, 2, Topology::kToric);
  EXPECT_EQ(parse_coloring(to_text(toric)), toric);
  EXPECT_EQ(to_text(elongated_coloring(3, 2)), "L=3\nRB\nBR\n");
  EXPECT_THROW(parse_coloring("L=3\nRB\nB\n"), std::invalid_argument);
  EXPECT_THROW(parse_coloring("L=3\nRX\nBR\n"), std::invalid_argument);
}

TEST(BuildCode, ToricCheckerboardCommutes) {
  for (std::size_t L : {4, 6, 8}) {
    auto code = build_code(elongated_coloring(L, 2, Topology::kToric));
    EXPECT_TRUE(validate_code(code).ok());
    EXPECT_EQ(code.x_stabilizers.size(), L * L / 2);
    EXPECT_EQ(code.z_stabilizers.size(), L * L / 2);
  }
}
