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

#include "compass/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "compass/coloring.h"
#include "compass/mwpm_decoder.h"
#include "compass/union_find_decoder.h"

namespace compass {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::pair<std::string_view, E> (&table)[N],
             const char* what) {
  for (const auto& [name, value] : table) {
    if (name == text) return value;
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr std::pair<std::string_view, CodeFamily> kFamilies[] = {
    {"elongated", CodeFamily::kElongated},
    {"surface-density", CodeFamily::kSurfaceDensity},
    {"shor-density", CodeFamily::kShorDensity},
    {"tailored", CodeFamily::kTailored},
};
constexpr std::pair<std::string_view, DecoderKind> kDecoders[] = {
    {"uf", DecoderKind::kUnionFind},
    {"uf-unweighted", DecoderKind::kUnweightedUnionFind},
    {"mwpm", DecoderKind::kMwpm},
};
constexpr std::pair<std::string_view, BoundaryMode> kBoundaries[] = {
    {"open", BoundaryMode::kOpen},
    {"periodic", BoundaryMode::kPeriodic},
};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "?";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool unit_interval(double q) { return q >= 0.0 && q <= 1.0; }

}  // namespace

std::string_view to_string(CodeFamily family) { return name_of(family, kFamilies); }
std::string_view to_string(DecoderKind decoder) { return name_of(decoder, kDecoders); }
std::string_view to_string(BoundaryMode mode) { return name_of(mode, kBoundaries); }
std::string_view to_string(NoiseKind noise) {
  switch (noise) {
    case NoiseKind::kBiased:
      return "biased";
    case NoiseKind::kLinearProfile:
      return "linear-profile";
    case NoiseKind::kRandomUniform:
      return "random-uniform";
  }
  return "?";
}
CodeFamily parse_family(std::string_view text) { return parse_enum(text, kFamilies, "family"); }
DecoderKind parse_decoder(std::string_view text) { return parse_enum(text, kDecoders, "decoder"); }
BoundaryMode parse_boundary(std::string_view text) {
  return parse_enum(text, kBoundaries, "boundary mode");
}

NoiseKind parse_noise(std::string_view text) {
  for (NoiseKind kind : {NoiseKind::kBiased, NoiseKind::kLinearProfile, NoiseKind::kRandomUniform}) {
    if (to_string(kind) == text) return kind;
  }
  throw std::invalid_argument("unknown noise model '" + std::string(text) + "'");
}

void validate(const BatchConfig& c) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (c.L < 2) fail("L must be at least 2");
  if (!(c.p >= 0.0 && c.p < 1.0)) fail("p must lie in [0, 1)");
  if (c.trials == 0) fail("trials must be positive");
  bool elongated = c.family == CodeFamily::kElongated;
  if (elongated && c.ell == 0) fail("family elongated needs ell >= 1");
  if (!elongated && c.ell != 0) fail("ell only applies to family elongated");
  bool surf = c.family == CodeFamily::kSurfaceDensity;
  bool shor = c.family == CodeFamily::kShorDensity;
  if (surf != !std::isnan(c.q_surf)) fail("q_surf applies exactly to family surface-density");
  if (shor != !std::isnan(c.q_shor)) fail("q_shor applies exactly to family shor-density");
  if (surf && !unit_interval(c.q_surf)) fail("q_surf must lie in [0, 1]");
  if (shor && !unit_interval(c.q_shor)) fail("q_shor must lie in [0, 1]");
  switch (c.noise) {
    case NoiseKind::kBiased:
      if (std::isnan(c.eta)) fail("biased noise needs eta");
      if (!std::isnan(c.w)) fail("w only applies to linear-profile noise");
      if (!(c.eta >= 0.0)) fail("eta must be non-negative");
      break;
    case NoiseKind::kLinearProfile:
      if (std::isnan(c.w)) fail("linear-profile noise needs w");
      if (!std::isnan(c.eta)) fail("eta only applies to biased noise");
      if (!unit_interval(c.w)) fail("w must lie in [0, 1]");
      break;
    case NoiseKind::kRandomUniform:
      if (!std::isnan(c.eta) || !std::isnan(c.w)) {
        fail("random-uniform noise takes neither eta nor w");
      }
      break;
  }
  if (c.family == CodeFamily::kTailored && c.p <= 0.0) fail("tailored codes need p > 0");
  if (!c.decode_z && !c.decode_x) fail("nothing to decode");
}

struct TrialPipeline::Side {
  DecoderGraph graph;
  std::unique_ptr<UnionFindDecoder> uf;
  std::unique_ptr<MwpmDecoder> mwpm;

  std::vector<std::uint32_t> decode(std::span<const std::uint8_t> syndrome) {
    return uf ? uf->decode(syndrome) : mwpm->decode(syndrome);
  }
};

TrialPipeline::TrialPipeline(CompassCode code, NoiseMap noise, DecoderKind decoder,
                             BoundaryMode mode, std::size_t rounds, bool decode_z, bool decode_x,
                             SeamChoice seams)
    : code_(std::move(code)), noise_(std::move(noise)), rounds_(rounds) {
  if (rounds_ > 0 && (noise_.x_measurement.size() != code_.x_stabilizers.size() ||
                      noise_.z_measurement.size() != code_.z_stabilizers.size())) {
    throw std::invalid_argument("faulty rounds need measurement rates for every stabilizer");
  }
  auto make_side = [&](ErrorType type, std::size_t seam) {
    auto side = std::make_unique<Side>();
    DecoderGraph g2 = build_decoder_graph(code_, noise_, type, mode, seam);
    if (rounds_ > 0) {
      const auto& rates = type == ErrorType::kZ ? noise_.x_measurement : noise_.z_measurement;
      side->graph = build_spacetime_graph(g2, rounds_, rates);
    } else {
      side->graph = std::move(g2);
    }
    if (decoder == DecoderKind::kMwpm) {
      side->mwpm = std::make_unique<MwpmDecoder>(side->graph);
    } else {
      UnionFindDecoder::Options opt;
      opt.weighted = decoder == DecoderKind::kUnionFind;
      side->uf = std::make_unique<UnionFindDecoder>(side->graph, opt);
    }
    return side;
  };
  const std::size_t mid = code_.L / 2;
  if (decode_z) z_ = make_side(ErrorType::kZ, seams.z_row.value_or(mid));
  if (decode_x) x_ = make_side(ErrorType::kX, seams.x_column.value_or(mid));
}

TrialPipeline::~TrialPipeline() = default;

const DecoderGraph* TrialPipeline::z_graph() const noexcept { return z_ ? &z_->graph : nullptr; }
const DecoderGraph* TrialPipeline::x_graph() const noexcept { return x_ ? &x_->graph : nullptr; }

void TrialPipeline::set_noise(NoiseMap noise) {
  if (rounds_ > 0) {
    throw std::invalid_argument("only code-capacity pipelines can change their noise map");
  }
  if (noise.L() != code_.L) {
    throw std::invalid_argument("noise map and code have different lattice sizes");
  }
  noise_ = std::move(noise);
  for (Side* side : {z_.get(), x_.get()}) {
    if (!side) continue;
    reweight(side->graph, noise_);
    if (side->uf) side->uf->reweight();
    if (side->mwpm) side->mwpm->reweight();
  }
}

TrialOutcome TrialPipeline::evaluate(const PauliSample& sample) {
  auto run = [&](Side& side) {
    auto flags = project_sample(side.graph, sample);
    Syndrome syndrome = syndrome_of(side.graph, flags);
    for (auto e : side.decode(syndrome)) flags[e] ^= 1;
    Syndrome left = syndrome_of(side.graph, flags);
    if (std::any_of(left.begin(), left.end(), [](std::uint8_t b) { return b != 0; })) {
      throw std::logic_error("correction leaves a nonzero syndrome");
    }
    return crosses_seam(side.graph, flags);
  };
  TrialOutcome out;
  if (z_) out.fail_z = run(*z_);
  if (x_) out.fail_x = run(*x_);
  return out;
}

TrialOutcome run_trial(TrialPipeline& pipeline, std::mt19937_64& rng) {
  return pipeline.evaluate(sample_pauli(pipeline.noise(), pipeline.rounds() + 1, rng));
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(~trial_index));
}

bool is_randomized(const BatchConfig& c) {
  return c.family != CodeFamily::kElongated || c.noise == NoiseKind::kRandomUniform;
}

std::unique_ptr<TrialPipeline> make_pipeline(const BatchConfig& c, std::mt19937_64& rng) {
  NoiseMap noise;
  switch (c.noise) {
    case NoiseKind::kBiased:
      noise = uniform_map(c.L, channel_from_bias(c.p, c.eta).rates);
      break;
    case NoiseKind::kLinearProfile:
      noise = linear_profile_map(c.L, c.p, c.w);
      break;
    case NoiseKind::kRandomUniform:
      noise = random_uniform_map(c.L, c.p, rng);
      break;
  }
  Coloring coloring(c.L);
  switch (c.family) {
    case CodeFamily::kElongated:
      coloring = elongated_coloring(c.L, c.ell);
      break;
    case CodeFamily::kSurfaceDensity:
      coloring = surface_density_coloring(c.L, c.q_surf, rng);
      break;
    case CodeFamily::kShorDensity:
      coloring = shor_density_coloring(c.L, c.q_shor, rng);
      break;
    case CodeFamily::kTailored:
      coloring = tailored_coloring(noise, c.p, rng);
      break;
  }
  CompassCode code = build_code(coloring);
  if (c.rounds > 0) {
    attach_measurement_rates(noise, code, noise.mean_z_marginal(), noise.mean_x_marginal());
  }
  bool decode_x = c.decode_x && c.noise != NoiseKind::kRandomUniform;
  return std::make_unique<TrialPipeline>(std::move(code), std::move(noise), c.decoder,
                                         c.boundary, c.rounds, c.decode_z, decode_x);
}

TrialBatch run_batch(const BatchConfig& config) {
  validate(config);
  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<std::size_t>(
      std::min<std::uint64_t>(workers, (config.trials + 255) / 256));
  const bool randomized = is_randomized(config);
  const bool noise_only = config.family == CodeFamily::kElongated &&
                          config.noise == NoiseKind::kRandomUniform && config.rounds == 0;
  constexpr std::uint64_t kChunk = 256;

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::exception_ptr error;
  TrialBatch batch;
  batch.config = config;
  batch.trials = config.trials;

  auto work = [&] {
    std::uint64_t fz = 0, fx = 0, fa = 0;
    try {
      std::unique_ptr<TrialPipeline> fixed;
      if (!randomized || noise_only) {
        std::mt19937_64 unused(config.master_seed);
        fixed = make_pipeline(config, unused);
      }
      while (!stop.load(std::memory_order_relaxed)) {
        std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= config.trials) break;
        std::uint64_t end = std::min(config.trials, begin + kChunk);
        for (std::uint64_t t = begin; t < end; ++t) {
          std::mt19937_64 rng(derive_seed(config.master_seed, t));
          TrialOutcome o;
          if (noise_only) {
            fixed->set_noise(random_uniform_map(config.L, config.p, rng));
            o = run_trial(*fixed, rng);
          } else if (randomized) {
            auto pipeline = make_pipeline(config, rng);
            o = run_trial(*pipeline, rng);
          } else {
            o = run_trial(*fixed, rng);
          }
          fz += o.fail_z;
          fx += o.fail_x;
          fa += o.any();
        }
      }
    } catch (...) {
      stop = true;
      std::lock_guard lock(mu);
      if (!error) error = std::current_exception();
      return;
    }
    std::lock_guard lock(mu);
    batch.fail_z += fz;
    batch.fail_x += fx;
    batch.fail_any += fa;
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  auto ci = wilson_interval(batch.fail_any, batch.trials);
  batch.ci_low = ci.low;
  batch.ci_high = ci.high;
  return batch;
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RepetitionOracle repetition_oracle(std::size_t L, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  RepetitionOracle out;
  const std::size_t k0 = (L + 1) / 2;
  if (p == 0.0) {
    out.p_rep = 0.0;
  } else if (p == 1.0) {
    out.p_rep = 1.0;
  } else {
    const double lp = std::log(p), lq = std::log1p(-p);
    const double lgL = std::lgamma(static_cast<double>(L) + 1.0);
    for (std::size_t k = k0; k <= L; ++k) {
      double kd = static_cast<double>(k), rest = static_cast<double>(L - k);
      double lc = lgL - std::lgamma(kd + 1.0) - std::lgamma(rest + 1.0);
      out.p_rep += std::exp(lc + kd * lp + rest * lq);
    }
    out.p_rep = std::min(out.p_rep, 1.0);
  }
  out.p_logical = 0.5 * (1.0 - std::pow(1.0 - 2.0 * out.p_rep, static_cast<double>(L)));
  return out;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double gv_gap(double p_x, double p_z) { return 1.0 - binary_entropy(p_x) - binary_entropy(p_z); }

std::string format_number(double value) {
  if (std::isnan(value)) return {};
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string batch_csv_header() {
  return "family,decoder,boundary,L,ell,q_surf,q_shor,w,eta,rounds,p,trials,fail_z,fail_x,"
         "fail_any,ci_low,ci_high,master_seed";
}

std::string batch_csv_row(const TrialBatch& b) {
  const BatchConfig& c = b.config;
  std::string row;
  bool first = true;
  auto put = [&](std::string_view field) {
    if (!first) row += ',';
    first = false;
    row += field;
  };
  put(to_string(c.family));
  put(to_string(c.decoder));
  put(to_string(c.boundary));
  put(std::to_string(c.L));
  put(c.family == CodeFamily::kElongated ? std::to_string(c.ell) : "");
  put(format_number(c.q_surf));
  put(format_number(c.q_shor));
  put(format_number(c.w));
  put(format_number(c.eta));
  put(std::to_string(c.rounds));
  put(format_number(c.p));
  put(std::to_string(b.trials));
  put(std::to_string(b.fail_z));
  put(std::to_string(b.fail_x));
  put(std::to_string(b.fail_any));
  put(format_number(b.ci_low));
  put(format_number(b.ci_high));
  put(std::to_string(c.master_seed));
  return row;
}

}  // namespace compass
