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

#include "compass/experiment.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "compass/compass_code.h"
#include "compass/rbim.h"
#include "compass/version.h"

namespace compass {
namespace {

using C = Command;

constexpr std::pair<std::string_view, Command> kCommands[] = {
    {"code", C::kCode},           {"sample", C::kSample}, {"threshold", C::kThreshold},
    {"sweep-eta", C::kSweepEta}, {"rbim", C::kRbim},     {"tailored", C::kTailored},
};

// Commands each key applies to, in manifest order.
struct KeyRule {
  const char* key;
  std::vector<Command> commands;
};

const std::vector<KeyRule>& key_rules() {
  static const std::vector<KeyRule> rules = {
      {"command", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim, C::kTailored}},
      {"family", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim}},
      {"ell", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim}},
      {"q-surf", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim}},
      {"q-shor", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim}},
      {"q-grid", {C::kRbim}},
      {"L", {C::kCode, C::kSample, C::kTailored}},
      {"sizes", {C::kThreshold, C::kSweepEta, C::kRbim}},
      {"decoder", {C::kSample, C::kThreshold, C::kSweepEta, C::kTailored}},
      {"boundary", {C::kSample, C::kThreshold, C::kSweepEta, C::kTailored}},
      {"noise", {C::kSample, C::kThreshold}},
      {"eta", {C::kSample, C::kThreshold}},
      {"w", {C::kSample, C::kThreshold, C::kTailored}},
      {"rounds", {C::kSample, C::kThreshold, C::kSweepEta, C::kTailored}},
      {"p", {C::kSample}},
      {"p-grid", {C::kThreshold, C::kSweepEta, C::kRbim, C::kTailored}},
      {"eta-grid", {C::kSweepEta}},
      {"trials", {C::kSample, C::kThreshold, C::kSweepEta, C::kTailored}},
      {"metric", {C::kThreshold, C::kSweepEta}},
      {"decode", {C::kSample, C::kThreshold, C::kSweepEta, C::kTailored}},
      {"bootstrap", {C::kThreshold, C::kSweepEta, C::kRbim}},
      {"topology", {C::kRbim}},
      {"samples", {C::kRbim}},
      {"sweeps", {C::kRbim}},
      {"thermalization", {C::kRbim}},
      {"local-sweeps", {C::kRbim}},
      {"seed", {C::kCode, C::kSample, C::kThreshold, C::kSweepEta, C::kRbim, C::kTailored}},
      {"workers", {C::kSample, C::kThreshold, C::kSweepEta, C::kRbim, C::kTailored}},
      {"out", {C::kSample, C::kThreshold, C::kSweepEta, C::kRbim, C::kTailored}},
      {"dump", {C::kCode}},
  };
  return rules;
}

bool applies(std::string_view key, Command command) {
  for (const auto& rule : key_rules()) {
    if (rule.key == key) {
      return std::find(rule.commands.begin(), rule.commands.end(), command) !=
             rule.commands.end();
    }
  }
  return false;
}

[[noreturn]] void usage(const std::string& message) { throw UsageError(message); }

double parse_double(std::string_view text, std::string_view what) {
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    usage("bad number '" + s + "' in " + std::string(what));
  }
  return v;
}

bool has_family_parameter(const ExperimentConfig& c) {
  return c.ell || c.q_surf || c.q_shor || !c.q_grid.empty();
}

// Conflicts visible from the flags alone.
void check_structure(const ExperimentConfig& c) {
  if (c.family) {
    CodeFamily f = *c.family;
    if (c.ell && f != CodeFamily::kElongated) {
      usage("ell conflicts with family " + std::string(to_string(f)));
    }
    if (c.q_surf && f != CodeFamily::kSurfaceDensity) {
      usage("q-surf conflicts with family " + std::string(to_string(f)));
    }
    if (c.q_shor && f != CodeFamily::kShorDensity) {
      usage("q-shor conflicts with family " + std::string(to_string(f)));
    }
    if (!c.q_grid.empty() && f == CodeFamily::kElongated) {
      usage("q-grid conflicts with family elongated");
    }
    if (f == CodeFamily::kTailored) usage("family tailored is run by the tailored command");
  } else if (has_family_parameter(c)) {
    usage("family parameters given without family");
  }
  if (c.eta && c.noise != NoiseKind::kBiased) {
    usage("eta conflicts with noise " + std::string(to_string(c.noise)));
  }
  if (c.w && c.noise != NoiseKind::kLinearProfile && c.command != C::kTailored) {
    usage("w conflicts with noise " + std::string(to_string(c.noise)));
  }
  if (!c.q_grid.empty() && (c.q_surf || c.q_shor)) usage("q-grid conflicts with q-surf/q-shor");
  bool sized = c.command == C::kThreshold || c.command == C::kSweepEta || c.command == C::kRbim;
  if (sized && c.sizes.empty()) usage("missing sizes for " + std::string(to_string(c.command)));
  bool single = c.command == C::kCode || c.command == C::kSample || c.command == C::kTailored;
  if (single && !c.L) usage("missing L for " + std::string(to_string(c.command)));
  if (c.decode != "both" && c.decode != "z" && c.decode != "x") {
    usage("decode must be both, z or x");
  }
  if (c.rounds && *c.rounds != "L") {
    std::size_t v = 0;
    const std::string& s = *c.rounds;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      usage("rounds must be a non-negative integer or L");
    }
  }
}

template <typename T>
void need(const std::optional<T>& value, const char* key, Command command) {
  if (!value) usage("missing " + std::string(key) + " for " + std::string(to_string(command)));
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string s;
  for (std::size_t L : sizes) s += (s.empty() ? "" : ",") + std::to_string(L);
  return s;
}

std::size_t rounds_for(const ExperimentConfig& c, std::size_t L) {
  if (*c.rounds == "L") return L;
  return std::stoull(*c.rounds);
}

BatchConfig batch_base(const ExperimentConfig& c) {
  BatchConfig b;
  if (c.family) b.family = *c.family;
  b.decoder = c.decoder;
  b.boundary = c.boundary;
  b.noise = c.noise;
  b.ell = c.ell.value_or(0);
  b.q_surf = c.q_surf.value_or(kUnset);
  b.q_shor = c.q_shor.value_or(kUnset);
  b.w = c.w.value_or(kUnset);
  b.eta = c.eta.value_or(kUnset);
  b.trials = c.trials.value_or(0);
  b.master_seed = *c.seed;
  b.decode_z = c.decode != "x";
  b.decode_x = c.decode != "z";
  b.workers = c.workers;
  if (c.rounds && *c.rounds != "L") b.rounds = std::stoull(*c.rounds);
  return b;
}

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
      if (ec) throw std::runtime_error("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot write " + path.string());
  }
  void line(const std::string& text) {
    file_ << text << '\n';
    file_.flush();
    if (!file_) throw std::runtime_error("write failed for " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream file_;
};

std::filesystem::path sibling(const std::filesystem::path& csv, const std::string& suffix) {
  std::filesystem::path p = csv;
  p.replace_filename(csv.stem().string() + suffix);
  return p;
}

void print_crossing(std::ostream& log, const std::string& label, const Crossing& c) {
  log << label << ": ";
  if (!c.found) {
    log << "no crossing\n";
    return;
  }
  log << format_number(c.p);
  if (!std::isnan(c.ci_low)) log << " [" << format_number(c.ci_low) << ", " << format_number(c.ci_high) << "]";
  log << '\n';
}

void run_code(const ExperimentConfig& c, std::ostream& out) {
  std::mt19937_64 rng(*c.seed);
  Coloring coloring(*c.L);
  switch (*c.family) {
    case CodeFamily::kElongated:
      coloring = elongated_coloring(*c.L, *c.ell);
      break;
    case CodeFamily::kSurfaceDensity:
      coloring = surface_density_coloring(*c.L, *c.q_surf, rng);
      break;
    case CodeFamily::kShorDensity:
      coloring = shor_density_coloring(*c.L, *c.q_shor, rng);
      break;
    case CodeFamily::kTailored:
      usage("family tailored is run by the tailored command");
  }
  CompassCode code = build_code(coloring);
  CodeReport report = validate_code(code);
  if (c.dump) out << to_text(coloring);
  out << "qubits " << code.num_qubits() << '\n';
  out << "x_stabilizers " << code.x_stabilizers.size() << '\n';
  if (c.dump) {
    for (const auto& s : code.x_stabilizers) {
      out << 'X';
      for (auto q : s) out << ' ' << q;
      out << '\n';
    }
  }
  out << "z_stabilizers " << code.z_stabilizers.size() << '\n';
  if (c.dump) {
    for (const auto& s : code.z_stabilizers) {
      out << 'Z';
      for (auto q : s) out << ' ' << q;
      out << '\n';
    }
  }
  out << "subspace " << (code.subspace ? "yes" : "no") << '\n';
  for (const auto& v : report.violations) out << "violation " << v << '\n';
  if (!report.ok()) throw std::runtime_error("code failed validation");
}

void log_batch(std::ostream& log, const TrialBatch& b) {
  log << to_string(b.config.family) << " L=" << b.config.L << " p=" << format_number(b.config.p)
      << " fail=" << b.fail_any << '/' << b.trials << '\n';
}

void run_sample(const ExperimentConfig& c, const std::filesystem::path& path, std::ostream& log) {
  BatchConfig b = batch_base(c);
  b.L = *c.L;
  b.p = *c.p;
  b.rounds = rounds_for(c, b.L);
  validate(b);
  CsvFile csv(path);
  csv.line(batch_csv_header());
  TrialBatch batch = run_batch(b);
  csv.line(batch_csv_row(batch));
  log_batch(log, batch);
}

ThresholdConfig threshold_config(const ExperimentConfig& c) {
  ThresholdConfig t;
  t.base = batch_base(c);
  t.sizes = c.sizes;
  t.p_grid = c.p_grid.values;
  t.trials = *c.trials;
  t.metric = c.metric;
  t.rounds_equal_L = *c.rounds == "L";
  t.bootstrap = c.bootstrap;
  t.base.L = c.sizes.front();
  t.base.p = t.p_grid.front();
  return t;
}

void run_threshold(const ExperimentConfig& c, const std::filesystem::path& path, std::ostream& log) {
  ThresholdConfig t = threshold_config(c);
  validate(t.base);
  CsvFile csv(path);
  csv.line(batch_csv_header());
  auto est = estimate_threshold(t, [&](const TrialBatch& b) {
    csv.line(batch_csv_row(b));
    log_batch(log, b);
  });
  print_crossing(log, "crossing (" + std::string(to_string(c.metric)) + ")", est.crossing);
}

void run_sweep(const ExperimentConfig& c, const std::filesystem::path& path, std::ostream& log) {
  ThresholdConfig t = threshold_config(c);
  t.base.noise = NoiseKind::kBiased;
  t.base.eta = c.eta_grid.values.front();
  validate(t.base);
  CsvFile csv(path);
  csv.line(batch_csv_header());
  BiasSweep sweep = sweep_bias(t, c.eta_grid.values, {}, [&](const TrialBatch& b) {
    csv.line(batch_csv_row(b));
    log_batch(log, b);
  });
  CsvFile summary(sibling(path, "_bias.csv"));
  summary.line("eta,p_c,ci_low,ci_high,p_z,p_x");
  for (const auto& pt : sweep.points) {
    const Crossing& k = pt.estimate.crossing;
    summary.line(format_number(pt.eta) + ',' + format_number(k.found ? k.p : kUnset) + ',' +
                 format_number(k.ci_low) + ',' + format_number(k.ci_high) + ',' +
                 format_number(pt.z.found ? pt.z.p : kUnset) + ',' +
                 format_number(pt.x.found ? pt.x.p : kUnset));
    print_crossing(log, "eta " + format_number(pt.eta), k);
  }
  log << "eta_opt " << format_number(sweep.eta_opt) << " p_opt " << format_number(sweep.p_opt)
      << '\n';
}

void run_rbim(const ExperimentConfig& c, const std::filesystem::path& path, std::ostream& log) {
  CriticalScan scan;
  RbimConfig& r = scan.base;
  r.family = *c.family;
  r.topology = c.topology;
  r.ell = c.ell.value_or(0);
  r.samples = *c.samples;
  r.sweeps = *c.sweeps;
  r.thermalization = *c.thermalization;
  r.local_sweeps = c.local_sweeps;
  r.master_seed = *c.seed;
  r.workers = c.workers;
  r.L = c.sizes.front();
  r.p = c.p_grid.values.front();
  scan.sizes = c.sizes;
  scan.p_grid = c.p_grid.values;
  scan.bootstrap = c.bootstrap;

  std::vector<double> qs;
  if (!c.q_grid.empty()) {
    qs = c.q_grid.values;
  } else if (c.q_surf) {
    qs = {*c.q_surf};
  } else if (c.q_shor) {
    qs = {*c.q_shor};
  } else {
    qs = {kUnset};
  }
  bool density = r.family != CodeFamily::kElongated;
  auto set_q = [&](double q) {
    r.q_surf = r.family == CodeFamily::kSurfaceDensity ? q : kUnset;
    r.q_shor = r.family == CodeFamily::kShorDensity ? q : kUnset;
  };
  set_q(qs.front());
  validate(r);

  CsvFile csv(path);
  csv.line(rbim_csv_header());
  std::optional<CsvFile> dens;
  if (density) {
    dens.emplace(sibling(path, "_density.csv"));
    dens->line(density_csv_header());
  }
  for (double q : qs) {
    set_q(q);
    CriticalEstimate est = find_critical(scan, [&](const RbimPoint& pt) {
      csv.line(rbim_csv_row(pt));
      log << "q=" << format_number(q) << " L=" << pt.config.L << " p=" << format_number(pt.config.p)
          << " U=" << format_number(pt.U) << '\n';
    });
    if (dens) dens->line(density_csv_row(q, est.crossing));
    print_crossing(log, density ? "q " + format_number(q) : "crossing", est.crossing);
  }
}

void run_tailored(const ExperimentConfig& c, const std::filesystem::path& path, std::ostream& log) {
  BatchConfig base = batch_base(c);
  base.noise = NoiseKind::kLinearProfile;
  base.L = *c.L;
  base.rounds = rounds_for(c, base.L);
  CsvFile csv(path);
  csv.line(batch_csv_header());
  std::vector<TrialBatch> tailored, surface;
  for (CodeFamily f : {CodeFamily::kTailored, CodeFamily::kElongated}) {
    for (double p : c.p_grid.values) {
      BatchConfig b = base;
      b.family = f;
      b.ell = f == CodeFamily::kElongated ? 2 : 0;
      b.p = p;
      validate(b);
      TrialBatch batch = run_batch(b);
      csv.line(batch_csv_row(batch));
      log_batch(log, batch);
      (f == CodeFamily::kTailored ? tailored : surface).push_back(batch);
    }
  }
  std::size_t run = 0, best = 0;
  for (std::size_t k = 0; k < tailored.size(); ++k) {
    run = tailored[k].rate() < surface[k].rate() ? run + 1 : 0;
    best = std::max(best, run);
  }
  log << "tailored below surface at " << best << " consecutive points\n";
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [name, value] : kCommands) {
    if (value == command) return name;
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (const auto& [name, value] : kCommands) {
    if (name == text) return value;
  }
  usage("unknown command '" + std::string(text) + "'");
}

Grid parse_grid(std::string_view text) {
  Grid g;
  g.text = std::string(text);
  std::string what = "grid '" + g.text + "'";
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      auto pos = text.find(':', start);
      parts.push_back(text.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3) usage(what + " needs start:stop:count");
    double a = parse_double(parts[0], what);
    double b = parse_double(parts[1], what);
    std::size_t n = 0;
    auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (res.ec != std::errc() || res.ptr != parts[2].data() + parts[2].size() || n == 0) {
      usage(what + " needs a positive integer count");
    }
    if (n == 1 && a != b) usage(what + " has one point but distinct ends");
    for (std::size_t k = 0; k < n; ++k) {
      g.values.push_back(k + 1 == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto pos = text.find(',', start);
      g.values.push_back(parse_double(text.substr(start, pos - start), what));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  return g;
}

ExperimentConfig parse_config(std::span<const std::string> args) {
  CLI::App app{"Compass code experiments", "compass"};
  ExperimentConfig c;
  std::string command, family, decoder, boundary, noise, metric, topology;
  std::string q_grid, p_grid, eta_grid;

  app.add_option("command", command, "code | sample | threshold | sweep-eta | rbim | tailored")
      ->required();
  app.set_config("--config", "", "Flat key = value file; flags override its keys");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--family", family, "elongated | surface-density | shor-density");
  app.add_option("--ell", c.ell, "Elongation of the elongated family");
  app.add_option("--q-surf", c.q_surf);
  app.add_option("--q-shor", c.q_shor);
  app.add_option("--q-grid", q_grid, "Plaquette densities for rbim");
  app.add_option("--L", c.L, "Lattice size");
  app.add_option("--sizes", c.sizes)->delimiter(',');
  app.add_option("--decoder", decoder, "uf | uf-unweighted | mwpm");
  app.add_option("--boundary", boundary, "open | periodic");
  app.add_option("--noise", noise, "biased | linear-profile | random-uniform");
  app.add_option("--eta", c.eta, "Bias p_z / (p_x + p_y)");
  app.add_option("--w", c.w, "Incline of the linear dephasing profile");
  app.add_option("--rounds", c.rounds, "Faulty syndrome rounds (0 for perfect, L for L rounds)");
  app.add_option("--p", c.p);
  app.add_option("--p-grid", p_grid, "start:stop:count or a,b,c");
  app.add_option("--eta-grid", eta_grid);
  app.add_option("--trials", c.trials);
  app.add_option("--metric", metric, "any | z | x");
  app.add_option("--decode", c.decode, "both | z | x");
  app.add_option("--bootstrap", c.bootstrap);
  app.add_option("--topology", topology, "toric | planar");
  app.add_option("--samples", c.samples, "Disorder realizations");
  app.add_option("--sweeps", c.sweeps);
  app.add_option("--thermalization", c.thermalization);
  app.add_option("--local-sweeps", c.local_sweeps);
  app.add_option("--seed", c.seed);
  app.add_option("--workers", c.workers);
  app.add_option("--out", c.out, "Output CSV path");
  app.add_flag("--dump", c.dump, "Print the coloring and every stabilizer");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  try {
    c.command = parse_command(command);
    if (!family.empty()) c.family = parse_family(family);
    if (!decoder.empty()) c.decoder = parse_decoder(decoder);
    if (!boundary.empty()) c.boundary = parse_boundary(boundary);
    if (!noise.empty()) c.noise = parse_noise(noise);
    if (!metric.empty()) c.metric = parse_metric(metric);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!topology.empty()) {
    if (topology == "toric") {
      c.topology = Topology::kToric;
    } else if (topology == "planar") {
      c.topology = Topology::kPlanar;
    } else {
      usage("topology must be toric or planar");
    }
  }
  if (!q_grid.empty()) c.q_grid = parse_grid(q_grid);
  if (!p_grid.empty()) c.p_grid = parse_grid(p_grid);
  if (!eta_grid.empty()) c.eta_grid = parse_grid(eta_grid);

  for (const auto& rule : key_rules()) {
    std::string key = rule.key;
    if (key == "command") continue;
    if (app.count("--" + key) > 0 && !applies(key, c.command)) {
      usage(key + " does not apply to command " + std::string(to_string(c.command)));
    }
  }
  check_structure(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  check_structure(c);
  Command cmd = c.command;
  if (cmd != C::kTailored) {
    need(c.family, "family", cmd);
    switch (*c.family) {
      case CodeFamily::kElongated:
        need(c.ell, "ell", cmd);
        break;
      case CodeFamily::kSurfaceDensity:
        if (!c.q_surf && c.q_grid.empty()) usage("missing q-surf for " + std::string(to_string(cmd)));
        break;
      case CodeFamily::kShorDensity:
        if (!c.q_shor && c.q_grid.empty()) usage("missing q-shor for " + std::string(to_string(cmd)));
        break;
      case CodeFamily::kTailored:
        break;
    }
    if (!c.q_grid.empty() && cmd != C::kRbim) usage("q-grid only applies to rbim");
  }
  if (cmd == C::kCode) return;
  bool decoding = cmd != C::kRbim;
  if (decoding) {
    need(c.rounds, "rounds", cmd);
    need(c.trials, "trials", cmd);
    if (*c.trials == 0) usage("trials must be positive");
  }
  if (cmd == C::kSample || cmd == C::kThreshold) {
    if (c.noise == NoiseKind::kBiased) need(c.eta, "eta", cmd);
    if (c.noise == NoiseKind::kLinearProfile) need(c.w, "w", cmd);
  }
  if (cmd == C::kTailored) need(c.w, "w", cmd);
  if (cmd == C::kSweepEta && c.eta_grid.empty()) usage("missing eta-grid for sweep-eta");
  if (cmd == C::kSample) {
    need(c.p, "p", cmd);
  } else if (c.p_grid.empty()) {
    usage("missing p-grid for " + std::string(to_string(cmd)));
  }
  if (cmd == C::kRbim) {
    need(c.samples, "samples", cmd);
    need(c.sweeps, "sweeps", cmd);
  }
  bool crossing = cmd == C::kThreshold || cmd == C::kSweepEta || cmd == C::kRbim;
  if (crossing && c.sizes.size() < 2) usage("sizes needs at least two lattice sizes");
  if (crossing && c.p_grid.values.size() < 2) usage("p-grid needs at least two points");
}

std::filesystem::path output_path(const ExperimentConfig& c) {
  std::filesystem::path out = c.out.empty() ? std::string(to_string(c.command)) + ".csv" : c.out;
  if (const char* dir = std::getenv("COMPASS_OUTPUT_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / out.filename();
  }
  return out;
}

std::string manifest_text(const ExperimentConfig& c) {
  if (!c.seed) throw std::logic_error("manifest needs a seed");
  std::map<std::string, std::string> values;
  auto opt = [&](const char* key, const auto& v) {
    if (v) {
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
        values[key] = format_number(*v);
      } else if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, std::string>) {
        values[key] = *v;
      } else {
        values[key] = std::to_string(*v);
      }
    }
  };
  values["command"] = std::string(to_string(c.command));
  if (c.family) values["family"] = std::string(to_string(*c.family));
  opt("ell", c.ell);
  opt("q-surf", c.q_surf);
  opt("q-shor", c.q_shor);
  if (!c.q_grid.empty()) values["q-grid"] = c.q_grid.text;
  opt("L", c.L);
  if (!c.sizes.empty()) values["sizes"] = join_sizes(c.sizes);
  values["decoder"] = std::string(to_string(c.decoder));
  values["boundary"] = std::string(to_string(c.boundary));
  values["noise"] = std::string(to_string(c.noise));
  opt("eta", c.eta);
  opt("w", c.w);
  opt("rounds", c.rounds);
  opt("p", c.p);
  if (!c.p_grid.empty()) values["p-grid"] = c.p_grid.text;
  if (!c.eta_grid.empty()) values["eta-grid"] = c.eta_grid.text;
  opt("trials", c.trials);
  values["metric"] = std::string(to_string(c.metric));
  values["decode"] = c.decode;
  values["bootstrap"] = std::to_string(c.bootstrap);
  values["topology"] = c.topology == Topology::kToric ? "toric" : "planar";
  opt("samples", c.samples);
  opt("sweeps", c.sweeps);
  opt("thermalization", c.thermalization);
  values["local-sweeps"] = std::to_string(c.local_sweeps);
  opt("seed", c.seed);
  values["workers"] = std::to_string(c.workers);
  values["out"] = c.out.empty() ? std::string(to_string(c.command)) + ".csv" : c.out;
  if (c.dump) values["dump"] = "true";

  std::ostringstream s;
  s << "# compass run manifest\n# version = " << kVersion << '\n';
  for (const auto& rule : key_rules()) {
    auto it = values.find(rule.key);
    if (it == values.end() || !applies(rule.key, c.command)) continue;
    std::string v = it->second;
    // Values with commas would otherwise parse as lists.
    if (v.find(',') != std::string::npos) v = '"' + v + '"';
    s << rule.key << " = " << v << '\n';
  }
  return s.str();
}

void execute(ExperimentConfig c, std::ostream& out, std::ostream& log) {
  if (c.command == C::kRbim && c.sweeps && !c.thermalization) c.thermalization = *c.sweeps / 10;
  validate(c);
  if (!c.seed) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    log << "seed " << *c.seed << '\n';
  }
  if (c.command == C::kCode) {
    run_code(c, out);
    return;
  }
  std::filesystem::path path = output_path(c);
  switch (c.command) {
    case C::kSample:
      run_sample(c, path, log);
      break;
    case C::kThreshold:
      run_threshold(c, path, log);
      break;
    case C::kSweepEta:
      run_sweep(c, path, log);
      break;
    case C::kRbim:
      run_rbim(c, path, log);
      break;
    case C::kTailored:
      run_tailored(c, path, log);
      break;
    case C::kCode:
      break;
  }
  std::filesystem::path manifest = path;
  manifest += ".manifest";
  std::ofstream m(manifest, std::ios::binary | std::ios::trunc);
  m << manifest_text(c);
  if (!m) throw std::runtime_error("cannot write " + manifest.string());
  log << "wrote " << path.string() << " and " << manifest.string() << '\n';
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  try {
    execute(parse_config(args), out, err);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace compass
