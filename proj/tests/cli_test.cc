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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "compass/experiment.h"
#include "compass/rbim.h"
#include "compass/version.h"

namespace compass {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("compass_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string usage_message(std::vector<std::string> args) {
  try {
    validate(parse_config(args));
  } catch (const UsageError& e) {
    return e.what();
  }
  return {};
}

int run(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  int rc = run_cli(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

std::vector<std::string> small_threshold(const std::string& out) {
  return {"threshold", "--family", "elongated", "--ell", "2", "--eta", "0.5",
          "--sizes", "3,5", "--rounds", "0", "--trials", "300",
          "--p-grid", "0.13:0.17:9", "--seed", "11", "--bootstrap", "20",
          "--out", out};
}

TEST(Grid, StartStopCount) {
  Grid g = parse_grid("0.13:0.17:9");
  ASSERT_EQ(g.values.size(), 9u);
  EXPECT_EQ(g.values.front(), 0.13);
  EXPECT_EQ(g.values.back(), 0.17);
  EXPECT_NEAR(g.values[4], 0.15, 1e-15);
  EXPECT_EQ(g.text, "0.13:0.17:9");
}

TEST(Grid, ListAndSinglePoint) {
  EXPECT_EQ(parse_grid("0.5,1,inf").values.size(), 3u);
  EXPECT_EQ(parse_grid("0.2:0.2:1").values, std::vector<double>{0.2});
}

TEST(Grid, Malformed) {
  EXPECT_THROW(parse_grid("0.1:0.2"), UsageError);
  EXPECT_THROW(parse_grid("0.1:0.2:0"), UsageError);
  EXPECT_THROW(parse_grid("0.1:0.2:x"), UsageError);
  EXPECT_THROW(parse_grid("0.1:0.3:1"), UsageError);
  EXPECT_THROW(parse_grid("0.1,,0.2"), UsageError);
}

TEST(ParseConfig, ThresholdExampleIsValid) {
  std::vector<std::string> args = {"threshold", "--family", "elongated", "--ell", "4",
                                   "--decoder", "uf", "--eta", "2.4", "--sizes", "17,25,33"};
  ExperimentConfig c = parse_config(args);
  EXPECT_EQ(c.command, Command::kThreshold);
  EXPECT_EQ(c.family, CodeFamily::kElongated);
  EXPECT_EQ(c.ell, 4u);
  EXPECT_EQ(c.eta, 2.4);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{17, 25, 33}));
}

TEST(ParseConfig, EllConflictsWithShorDensity) {
  auto msg = usage_message({"threshold", "--family", "shor-density", "--ell", "2", "--sizes", "5,7"});
  EXPECT_NE(msg.find("ell"), std::string::npos) << msg;
}

TEST(ParseConfig, MissingSizes) {
  auto msg = usage_message({"threshold", "--family", "elongated", "--ell", "2", "--eta", "0.5"});
  EXPECT_NE(msg.find("sizes"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownCommandAndFlag) {
  EXPECT_NE(usage_message({"plot"}).find("plot"), std::string::npos);
  EXPECT_FALSE(usage_message({"code", "--bogus", "1"}).empty());
}

TEST(ParseConfig, KeyOutsideItsCommand) {
  auto msg = usage_message({"rbim", "--family", "elongated", "--ell", "2", "--sizes", "4,6",
                            "--trials", "3"});
  EXPECT_NE(msg.find("trials"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownConfigKeyIsNamed) {
  TempDir dir;
  std::ofstream(dir.file("run.ini")) << "family = elongated\nell = 2\nL = 3\nbogus_key = 4\n";
  auto msg = usage_message({"code", "--config", dir.file("run.ini")});
  EXPECT_NE(msg.find("bogus_key"), std::string::npos) << msg;
}

TEST(ParseConfig, FlagsOverrideConfigFile) {
  TempDir dir;
  std::ofstream(dir.file("run.ini")) << "command = threshold\nfamily = elongated\nell = 2\n"
                                        "eta = 0.5\nsizes = 5,7\n";
  std::vector<std::string> args = {"--config", dir.file("run.ini"), "--eta", "3"};
  ExperimentConfig c = parse_config(args);
  EXPECT_EQ(c.command, Command::kThreshold);
  EXPECT_EQ(c.eta, 3.0);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{5, 7}));
}

TEST(Validate, PhysicsParametersAreNeverDefaulted) {
  std::vector<std::string> base = {"threshold", "--family", "elongated", "--ell", "2",
                                   "--sizes", "3,5", "--trials", "10", "--p-grid", "0.1,0.2"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return usage_message(args);
  };
  EXPECT_NE(with({"--eta", "1"}).find("rounds"), std::string::npos);
  EXPECT_NE(with({"--rounds", "0"}).find("eta"), std::string::npos);
  EXPECT_NE(with({"--rounds", "0", "--noise", "linear-profile"}).find("w"), std::string::npos);
  EXPECT_EQ(with({"--rounds", "0", "--noise", "random-uniform"}), "");
  EXPECT_EQ(with({"--rounds", "L", "--eta", "1"}), "");
  EXPECT_NE(with({"--rounds", "two", "--eta", "1"}).find("rounds"), std::string::npos);
  EXPECT_NE(usage_message({"tailored", "--L", "5", "--rounds", "0", "--trials", "5",
                           "--p-grid", "0.1,0.2"})
                .find("w"),
            std::string::npos);
  EXPECT_NE(usage_message({"sweep-eta", "--family", "elongated", "--ell", "2", "--sizes", "3,5",
                           "--rounds", "0", "--trials", "5", "--p-grid", "0.1,0.2"})
                .find("eta-grid"),
            std::string::npos);
}

TEST(Validate, NoiseParameterConflicts) {
  EXPECT_NE(usage_message({"sample", "--family", "elongated", "--ell", "2", "--L", "5",
                           "--noise", "linear-profile", "--eta", "1"})
                .find("eta"),
            std::string::npos);
  EXPECT_NE(usage_message({"sample", "--family", "elongated", "--ell", "2", "--L", "5", "--w",
                           "0.1"})
                .find("w"),
            std::string::npos);
}

TEST(Execute, CodeDumpOfShorCode) {
  std::string out;
  ASSERT_EQ(run({"code", "--family", "elongated", "--ell", "1", "--L", "3", "--dump"}, &out), 0);
  std::size_t x = 0, z = 0;
  for (const auto& line : lines_of(out)) {
    if (line.rfind("X ", 0) == 0) ++x;
    if (line.rfind("Z ", 0) == 0) ++z;
  }
  EXPECT_EQ(x, 2u);
  EXPECT_EQ(z, 6u);
  EXPECT_NE(out.find("x_stabilizers 2"), std::string::npos);
  EXPECT_NE(out.find("z_stabilizers 6"), std::string::npos);
  EXPECT_NE(out.find("L=3"), std::string::npos);
}

TEST(Execute, ThresholdGridRowsAndManifest) {
  TempDir dir;
  std::string csv = dir.file("thr.csv");
  ASSERT_EQ(run(small_threshold(csv)), 0);
  auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 1 + 2 * 9u);
  EXPECT_EQ(rows[0], batch_csv_header());
  std::size_t small = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) small += rows[k].find(",3,2,") != std::string::npos;
  EXPECT_EQ(small, 9u);

  std::string manifest = slurp(csv + ".manifest");
  EXPECT_NE(manifest.find(std::string("# version = ") + kVersion), std::string::npos);
  EXPECT_NE(manifest.find("seed = 11\n"), std::string::npos);
  EXPECT_NE(manifest.find("p-grid = 0.13:0.17:9\n"), std::string::npos);
}

TEST(Execute, RerunFromManifestIsByteIdentical) {
  TempDir dir;
  std::string first = dir.file("a.csv");
  std::string second = dir.file("b.csv");
  ASSERT_EQ(run(small_threshold(first)), 0);
  ASSERT_EQ(run({"--config", first + ".manifest", "--out", second, "--workers", "3"}), 0);
  EXPECT_EQ(slurp(first), slurp(second));
}

TEST(Execute, SeedIsDrawnAndRecordedWhenAbsent) {
  TempDir dir;
  std::string csv = dir.file("s.csv");
  ASSERT_EQ(run({"sample", "--family", "elongated", "--ell", "2", "--L", "3", "--eta", "0.5",
                 "--rounds", "0", "--p", "0.1", "--trials", "50", "--out", csv}),
            0);
  std::string manifest = slurp(csv + ".manifest");
  auto pos = manifest.find("seed = ");
  ASSERT_NE(pos, std::string::npos);
  std::string replay = dir.file("replay.csv");
  ASSERT_EQ(run({"--config", csv + ".manifest", "--out", replay}), 0);
  EXPECT_EQ(slurp(csv), slurp(replay));
}

TEST(Execute, OutputDirectoryFromEnvironment) {
  TempDir dir;
  fs::path target = dir.path() / "elsewhere";
  ::setenv("COMPASS_OUTPUT_DIR", target.c_str(), 1);
  int rc = run({"sample", "--family", "elongated", "--ell", "2", "--L", "3", "--eta", "0.5",
                "--rounds", "0", "--p", "0.1", "--trials", "20", "--seed", "5", "--out",
                "nested/run.csv"});
  ::unsetenv("COMPASS_OUTPUT_DIR");
  ASSERT_EQ(rc, 0);
  EXPECT_TRUE(fs::exists(target / "run.csv"));
  EXPECT_TRUE(fs::exists(target / "run.csv.manifest"));
  EXPECT_FALSE(fs::exists("nested/run.csv"));
}

TEST(Execute, WriteFailureNamesThePath) {
  TempDir dir;
  std::ofstream(dir.file("blocker")) << "x";
  std::string bad = dir.file("blocker") + "/run.csv";
  std::string err;
  int rc = run({"sample", "--family", "elongated", "--ell", "2", "--L", "3", "--eta", "0.5",
                "--rounds", "0", "--p", "0.1", "--trials", "20", "--seed", "5", "--out", bad},
               nullptr, &err);
  EXPECT_EQ(rc, 1);
  EXPECT_NE(err.find("blocker"), std::string::npos) << err;
}

TEST(Execute, UsageErrorExitCode) {
  std::string err;
  EXPECT_EQ(run({"threshold", "--family", "elongated", "--ell", "2"}, nullptr, &err), 2);
  EXPECT_NE(err.find("sizes"), std::string::npos);
}

TEST(Execute, RbimWritesDensityTable) {
  TempDir dir;
  std::string csv = dir.file("r.csv");
  ASSERT_EQ(run({"rbim", "--family", "surface-density", "--q-grid", "0:1:2", "--sizes", "4,6",
                 "--p-grid", "0.05,0.15", "--samples", "3", "--sweeps", "40", "--seed", "3",
                 "--bootstrap", "10", "--out", csv}),
            0);
  auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 1 + 2 * 2 * 2u);
  EXPECT_EQ(rows[0], rbim_csv_header());
  auto density = lines_of(slurp(dir.file("r_density.csv")));
  ASSERT_EQ(density.size(), 3u);
  EXPECT_EQ(density[0], "q,p_c,ci");
  EXPECT_EQ(density[1].rfind("0,", 0), 0u);
  EXPECT_EQ(density[2].rfind("1,", 0), 0u);
  EXPECT_NE(slurp(csv + ".manifest").find("thermalization = 4\n"), std::string::npos);
}

TEST(Execute, TailoredComparesBothFamilies) {
  TempDir dir;
  std::string csv = dir.file("t.csv");
  ASSERT_EQ(run({"tailored", "--L", "5", "--w", "0.1", "--rounds", "0", "--trials", "40",
                 "--p-grid", "0.2,0.3", "--seed", "4", "--out", csv}),
            0);
  auto rows = lines_of(slurp(csv));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[1].rfind("tailored,", 0), 0u);
  EXPECT_EQ(rows[3].rfind("elongated,", 0), 0u);
}

TEST(CsvSchema, DensityRow) {
  Crossing c;
  c.found = true;
  c.p = 0.1;
  c.ci_low = 0.09;
  c.ci_high = 0.12;
  EXPECT_EQ(density_csv_row(0.5, c), "0.5,0.1,0.015");
  EXPECT_EQ(density_csv_row(0.0, Crossing{}), "0,,");
}

TEST(CsvSchema, PlotColumnsPresent) {
  auto has = [](const std::string& header, const std::string& col) {
    std::string padded = "," + header + ",";
    return padded.find("," + col + ",") != std::string::npos;
  };
  for (const char* col : {"family", "L", "p", "trials", "fail_any", "ci_low", "ci_high"}) {
    EXPECT_TRUE(has(batch_csv_header(), col)) << col;
  }
  for (const char* col : {"q_surf", "L", "p", "U", "U_err"}) {
    EXPECT_TRUE(has(rbim_csv_header(), col)) << col;
  }
  for (const char* col : {"q", "p_c", "ci"}) EXPECT_TRUE(has(density_csv_header(), col)) << col;
}

}  // namespace
}  // namespace compass
