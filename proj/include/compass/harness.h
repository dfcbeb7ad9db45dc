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
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "compass/compass_code.h"
#include "compass/decoder_graph.h"
#include "compass/noise.h"

namespace compass {

enum class CodeFamily : std::uint8_t { kElongated, kSurfaceDensity, kShorDensity, kTailored };
enum class DecoderKind : std::uint8_t { kUnionFind, kUnweightedUnionFind, kMwpm };
/// kBiased: uniform eta-biased channel. kLinearProfile: the inclined
/// dephasing profile with incline w. kRandomUniform: pure dephasing with
/// per-qubit rates drawn from [0, 2p], redrawn every trial.
enum class NoiseKind : std::uint8_t { kBiased, kLinearProfile, kRandomUniform };

std::string_view to_string(CodeFamily family);
std::string_view to_string(DecoderKind decoder);
std::string_view to_string(BoundaryMode mode);
std::string_view to_string(NoiseKind noise);
CodeFamily parse_family(std::string_view text);
DecoderKind parse_decoder(std::string_view text);
BoundaryMode parse_boundary(std::string_view text);
NoiseKind parse_noise(std::string_view text);

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct BatchConfig {
  CodeFamily family = CodeFamily::kElongated;
  DecoderKind decoder = DecoderKind::kUnionFind;
  BoundaryMode boundary = BoundaryMode::kOpen;
  NoiseKind noise = NoiseKind::kBiased;
  std::size_t L = 0;
  std::size_t ell = 0;
  double q_surf = kUnset;
  double q_shor = kUnset;
  double w = kUnset;
  double eta = kUnset;
  /// Faulty syndrome rounds; 0 is code capacity.
  std::size_t rounds = 0;
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  bool decode_z = true;
  bool decode_x = true;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t workers = 0;
};

/// Throws std::invalid_argument naming the first inconsistent field.
void validate(const BatchConfig& config);

struct TrialBatch {
  BatchConfig config;
  std::uint64_t trials = 0;
  std::uint64_t fail_z = 0;
  std::uint64_t fail_x = 0;
  std::uint64_t fail_any = 0;
  /// Wilson 95% interval of the fail_any rate.
  double ci_low = 0.0;
  double ci_high = 0.0;
  double rate() const noexcept {
    return trials ? static_cast<double>(fail_any) / static_cast<double>(trials) : 0.0;
  }
};

struct TrialOutcome {
  bool fail_z = false;
  bool fail_x = false;
  bool any() const noexcept { return fail_z || fail_x; }
};

/// Seam placement overrides; unset keeps the floor(L/2) default.
struct SeamChoice {
  std::optional<std::size_t> z_row;
  std::optional<std::size_t> x_column;
};

/// Code, noise, decoder graphs and decoders for one trial configuration.
/// Decoders keep references into the graphs, so the object never moves.
class TrialPipeline {
 public:
  TrialPipeline(CompassCode code, NoiseMap noise, DecoderKind decoder, BoundaryMode mode,
                std::size_t rounds, bool decode_z = true, bool decode_x = true,
                SeamChoice seams = {});
  ~TrialPipeline();
  TrialPipeline(const TrialPipeline&) = delete;
  TrialPipeline& operator=(const TrialPipeline&) = delete;

  const CompassCode& code() const noexcept { return code_; }
  const NoiseMap& noise() const noexcept { return noise_; }
  std::size_t rounds() const noexcept { return rounds_; }
  /// Null when that error type is not decoded.
  const DecoderGraph* z_graph() const noexcept;
  const DecoderGraph* x_graph() const noexcept;

  /// Replaces the qubit rates of a code-capacity pipeline and reweights its
  /// decoders; equivalent to rebuilding with the new map.
  void set_noise(NoiseMap noise);

  /// Decodes a given sample. Throws std::logic_error if a correction leaves
  /// a nonzero syndrome.
  TrialOutcome evaluate(const PauliSample& sample);

 private:
  struct Side;
  CompassCode code_;
  NoiseMap noise_;
  std::size_t rounds_;
  std::unique_ptr<Side> z_;
  std::unique_ptr<Side> x_;
};

/// Samples rounds + 1 rounds of noise and decodes them.
TrialOutcome run_trial(TrialPipeline& pipeline, std::mt19937_64& rng);

/// Per-trial seed; independent of worker count and scheduling.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index);

/// Coloring and noise map of a configuration. Randomized families and the
/// random-uniform noise model draw from `rng`.
std::unique_ptr<TrialPipeline> make_pipeline(const BatchConfig& config, std::mt19937_64& rng);

/// True when the code or the noise changes from trial to trial.
bool is_randomized(const BatchConfig& config);

TrialBatch run_batch(const BatchConfig& config);

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

struct RepetitionOracle {
  double p_rep = 0.0;
  double p_logical = 0.0;
};
/// Majority-vote failure of a length-L repetition code and of L independent
/// copies composed by parity.
RepetitionOracle repetition_oracle(std::size_t L, double p);

double binary_entropy(double p);
/// 1 - H(p_x) - H(p_z); nonnegative inside the zero-rate Gilbert-Varshamov region.
double gv_gap(double p_x, double p_z);

/// Columns: family, decoder, boundary, L, ell, q_surf, q_shor, w, eta,
/// rounds, p, trials, fail_z, fail_x, fail_any, ci_low, ci_high, master_seed.
std::string batch_csv_header();
std::string batch_csv_row(const TrialBatch& batch);
/// Shortest round-tripping decimal; empty for NaN.
std::string format_number(double value);

}  // namespace compass
