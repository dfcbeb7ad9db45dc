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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "compass/coloring.h"
#include "compass/harness.h"
#include "compass/threshold.h"

namespace compass {

enum class Command : std::uint8_t { kCode, kSample, kThreshold, kSweepEta, kRbim, kTailored };

std::string_view to_string(Command command);
Command parse_command(std::string_view text);

/// Bad flags, bad config keys or a command missing a parameter it needs.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parsed grid keeps its source text so manifests reproduce it verbatim.
struct Grid {
  std::string text;
  std::vector<double> values;
  bool empty() const noexcept { return values.empty(); }
};

/// "start:stop:count" (count evenly spaced values, both ends included) or
/// a comma-separated list.
Grid parse_grid(std::string_view text);

struct ExperimentConfig {
  Command command = Command::kCode;

  std::optional<CodeFamily> family;
  std::optional<std::size_t> ell;
  std::optional<double> q_surf;
  std::optional<double> q_shor;
  Grid q_grid;

  std::optional<std::size_t> L;
  std::vector<std::size_t> sizes;

  DecoderKind decoder = DecoderKind::kUnionFind;
  BoundaryMode boundary = BoundaryMode::kOpen;
  NoiseKind noise = NoiseKind::kBiased;
  std::optional<double> eta;
  std::optional<double> w;
  /// Integer or the literal "L" (rounds equal to the lattice size).
  std::optional<std::string> rounds;
  std::optional<double> p;
  Grid p_grid;
  Grid eta_grid;
  std::optional<std::uint64_t> trials;
  FailureMetric metric = FailureMetric::kAny;
  /// Which error species are decoded: "both", "z" or "x".
  std::string decode = "both";
  std::size_t bootstrap = 1000;

  Topology topology = Topology::kPlanar;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> sweeps;
  std::optional<std::size_t> thermalization;
  std::size_t local_sweeps = 1;

  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::string out;
  bool dump = false;
};

/// Parses argv-style arguments (without the program name). A `--config`
/// file supplies defaults in flat `key = value` form using the long flag
/// names; flags given on the command line win. Throws UsageError.
ExperimentConfig parse_config(std::span<const std::string> args);

/// Throws UsageError naming the first parameter the command needs but
/// lacks, or one that does not apply to it.
void validate(const ExperimentConfig& config);

/// Output CSV path: `out` (or "<command>.csv"), moved into
/// $COMPASS_OUTPUT_DIR when that variable is set.
std::filesystem::path output_path(const ExperimentConfig& config);

/// Every key needed to rerun the experiment, in config-file form, with
/// the version string as a comment line. Requires a seed.
std::string manifest_text(const ExperimentConfig& config);

/// Runs the command, writing CSV output plus "<csv>.manifest". Draws and
/// records a seed when none was given. Progress goes to `log`; the code
/// command prints to `out`.
void execute(ExperimentConfig config, std::ostream& out, std::ostream& log);

/// parse_config + validate + execute with diagnostics on `err`; returns 0,
/// 2 for usage errors and 1 for any other failure.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace compass
