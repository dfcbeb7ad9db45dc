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

#include "compass/compass_code.h"

#include <algorithm>
#include <sstream>

namespace compass {

namespace {

// Splits a cyclic or linear run of `length` positions at the cuts (a cut at
// position k separates k from k + 1) and returns inclusive [first, last]
// ranges. Cyclic ranges may wrap, in which case last < first.
std::vector<std::pair<std::size_t, std::size_t>> segments(const std::vector<bool>& cut_after,
                                                          std::size_t length, bool cyclic) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!cyclic) {
    std::size_t start = 0;
    for (std::size_t k = 0; k + 1 < length; ++k) {
      if (cut_after[k]) {
        out.emplace_back(start, k);
        start = k + 1;
      }
    }
    out.emplace_back(start, length - 1);
    return out;
  }
  std::vector<std::size_t> cuts;
  for (std::size_t k = 0; k < length; ++k) {
    if (cut_after[k]) cuts.push_back(k);
  }
  if (cuts.empty()) {
    out.emplace_back(0, length - 1);
    return out;
  }
  for (std::size_t m = 0; m < cuts.size(); ++m) {
    std::size_t first = (cuts[m] + 1) % length;
    std::size_t last = cuts[(m + 1) % cuts.size()];
    out.emplace_back(first, last);
  }
  return out;
}

std::vector<std::size_t> expand(std::pair<std::size_t, std::size_t> range, std::size_t length) {
  std::vector<std::size_t> out;
  std::size_t k = range.first;
  while (true) {
    out.push_back(k);
    if (k == range.second) break;
    k = (k + 1) % length;
  }
  return out;
}

}  // namespace

CompassCode build_code(const Coloring& coloring) {
  CompassCode code;
  const std::size_t L = coloring.L();
  const bool toric = coloring.topology() == Topology::kToric;
  code.L = L;
  code.topology = coloring.topology();
  code.subspace = coloring.is_subspace();
  const std::size_t pairs = coloring.cells_per_side();

  for (std::size_t i = 0; i < pairs; ++i) {
    std::vector<bool> cut(L, false);
    for (std::size_t j = 0; j < pairs; ++j) {
      cut[j] = coloring.at(i, j) == Plaquette::kBlue;
    }
    const std::size_t rows[2] = {i, (i + 1) % L};
    for (auto range : segments(cut, L, toric)) {
      QubitSupport s;
      for (std::size_t col : expand(range, L)) {
        for (std::size_t r : rows) s.push_back(static_cast<std::uint32_t>(r * L + col));
      }
      std::sort(s.begin(), s.end());
      code.x_stabilizers.push_back(std::move(s));
    }
  }

  for (std::size_t j = 0; j < pairs; ++j) {
    std::vector<bool> cut(L, false);
    for (std::size_t i = 0; i < pairs; ++i) {
      cut[i] = coloring.at(i, j) == Plaquette::kRed;
    }
    const std::size_t cols[2] = {j, (j + 1) % L};
    for (auto range : segments(cut, L, toric)) {
      QubitSupport s;
      for (std::size_t row : expand(range, L)) {
        for (std::size_t c : cols) s.push_back(static_cast<std::uint32_t>(row * L + c));
      }
      std::sort(s.begin(), s.end());
      code.z_stabilizers.push_back(std::move(s));
    }
  }
  return code;
}

CodeReport validate_code(const CompassCode& code) {
  CodeReport report;
  const std::size_t n = code.num_qubits();
  std::vector<int> x_count(n, 0);
  std::vector<int> z_count(n, 0);
  auto tally = [&](const std::vector<QubitSupport>& stabs, std::vector<int>& count, char kind) {
    for (std::size_t s = 0; s < stabs.size(); ++s) {
      for (auto q : stabs[s]) {
        if (q >= n) {
          std::ostringstream msg;
          msg << kind << "-stabilizer " << s << " acts on qubit " << q << " outside the lattice";
          report.violations.push_back(msg.str());
          continue;
        }
        ++count[q];
      }
    }
  };
  tally(code.x_stabilizers, x_count, 'X');
  tally(code.z_stabilizers, z_count, 'Z');
  for (std::size_t q = 0; q < n; ++q) {
    if (x_count[q] > 2 || z_count[q] > 2) {
      std::ostringstream msg;
      msg << "qubit " << q << " lies in " << x_count[q] << " X- and " << z_count[q]
          << " Z-stabilizers (at most two of each allowed)";
      report.violations.push_back(msg.str());
    }
  }

  // Supports are small; a marker array keeps the pairwise test linear in the
  // Z-stabilizer size.
  std::vector<std::uint8_t> in_x(n, 0);
  for (std::size_t a = 0; a < code.x_stabilizers.size(); ++a) {
    for (auto q : code.x_stabilizers[a]) {
      if (q < n) in_x[q] = 1;
    }
    for (std::size_t b = 0; b < code.z_stabilizers.size(); ++b) {
      int overlap = 0;
      for (auto q : code.z_stabilizers[b]) {
        if (q < n) overlap += in_x[q];
      }
      if (overlap % 2 != 0) {
        std::ostringstream msg;
        msg << "odd overlap between X-stabilizer " << a << " and Z-stabilizer " << b;
        report.violations.push_back(msg.str());
      }
    }
    for (auto q : code.x_stabilizers[a]) {
      if (q < n) in_x[q] = 0;
    }
  }

  if (code.topology == Topology::kPlanar && code.subspace) {
    std::size_t total = code.x_stabilizers.size() + code.z_stabilizers.size();
    if (total != n - 1) {
      std::ostringstream msg;
      msg << "subspace code has " << total << " stabilizers, expected " << n - 1;
      report.violations.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace compass
