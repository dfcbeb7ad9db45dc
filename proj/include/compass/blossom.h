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

namespace compass {

struct MatchingEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::int64_t weight = 0;
};

/// Edmonds' blossom algorithm with primal-dual updates, O(n^3). Returns
/// mate[v] (or -1). With `max_cardinality` the result is a maximum-weight
/// matching among the maximum-cardinality ones.
std::vector<std::int64_t> max_weight_matching(std::size_t num_vertices,
                                              std::span<const MatchingEdge> edges,
                                              bool max_cardinality);

/// Minimum-total-weight perfect matching. Throws std::invalid_argument if
/// the graph has no perfect matching.
std::vector<std::int64_t> min_weight_perfect_matching(std::size_t num_vertices,
                                                      std::span<const MatchingEdge> edges);

}  // namespace compass
