// Copyright 2026 The nmzi Authors
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
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nmzi/commands.hpp"

namespace nmzi {
namespace {

namespace fs = std::filesystem;

/// Shipped configs directory: the environment wins over the build-time path.
const char* configs_dir() {
  if (const char* env = std::getenv("NMZI_CONFIGS")) return env;
#ifdef NMZI_CONFIGS_DIR
  return NMZI_CONFIGS_DIR;
#else
  return nullptr;
#endif
}

const char* cli_path() {
  if (const char* env = std::getenv("NMZI_CLI")) return env;
#ifdef NMZI_CLI_PATH
  return NMZI_CLI_PATH;
#else
  return nullptr;
#endif
}

ConfigFile with_probes(ProbeSet probes) {
  ConfigFile cfg;
  cfg.probes = std::move(probes);
  return cfg;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::runtime_error("no column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nmzi-cli-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// --- simulate ----------------------------------------------------------------

TEST(Simulate, COnlyProbeAmplitudes) {
  const auto out = cmd_simulate(with_probes(ProbeSet{ProbeConfig::nonlocal_w("w", 1e-4, false, true)}));
  EXPECT_EQ(out["schema_version"], 1);
  const auto& amps = out["probes"][0]["amplitudes"];
  EXPECT_NEAR(amps[0][0].get<double>(), 0.99995, 1e-6);
  EXPECT_NEAR(amps[1][0].get<double>(), 0.01, 1e-12);
  EXPECT_NEAR(amps[0][1].get<double>(), 0.0, 1e-15);
}

TEST(Simulate, BothArmProbeHasNoTrace) {
  const auto out = cmd_simulate(with_probes(ProbeSet{ProbeConfig::nonlocal_w("w", 1e-4)}));
  EXPECT_LE(out["probes"][0]["bures_angle"].get<double>(), 1e-12);
}

TEST(Simulate, NoProbes) {
  const auto out = cmd_simulate(ConfigFile{});
  EXPECT_NEAR(out["acceptance_probability"].get<double>(), 1.0 / 9.0, 1e-12);
  EXPECT_TRUE(out["probes"].empty());
  EXPECT_NEAR(out["weak_values"]["B"][0].get<double>(), -1.0, 1e-12);
}

TEST(Simulate, OracleEngineReportsTheSameNumbers) {
  const auto cfg = with_probes(seven_local_probes(0.01));
  const auto a = cmd_simulate(cfg, Engine::statevec);
  const auto b = cmd_simulate(cfg, Engine::oracle);
  EXPECT_NEAR(a["acceptance_probability"].get<double>(), b["acceptance_probability"].get<double>(), 1e-14);
  for (std::size_t k = 0; k < 7; ++k) {
    EXPECT_NEAR(a["probes"][k]["bures_angle"].get<double>(), b["probes"][k]["bures_angle"].get<double>(), 1e-10);
  }
  EXPECT_EQ(b["engine"], "oracle");
}

TEST(Simulate, OracleRejectsPointers) {
  const auto cfg = with_probes(ProbeSet{ProbeConfig::gaussian_pointer("p", {PathLabel::A}, 0.02, 1.0)});
  EXPECT_THROW((void)cmd_simulate(cfg, Engine::oracle), std::invalid_argument);
  const auto out = cmd_simulate(cfg);
  EXPECT_NEAR(out["probes"][0]["mean_shift"].get<double>(), 0.02, 2e-4);
}

// --- counts ------------------------------------------------------------------

ConfigFile counting(std::uint64_t n, std::uint64_t seed) {
  auto cfg = with_probes(seven_local_probes(1e-4));
  cfg.campaign.n_runs = n;
  cfg.campaign.seed = seed;
  return cfg;
}

TEST(Counts, CsvSchema) {
  const auto res = cmd_counts(counting(100'000, 1));
  const auto rows = read_csv(res.csv);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"probe", "expected", "observed", "sigma"}));
  EXPECT_EQ(rows[1][0], "S");
  EXPECT_NEAR(std::stod(rows[1][1]), 10.0, 1e-6);
}

TEST(Counts, JsonCarriesSchemaSeedAndConfigEcho) {
  const auto cfg = counting(100'000, 99);
  const auto j = json::parse(cmd_counts(cfg).json_text);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["seed"], 99);
  EXPECT_EQ(j["generator"], std::string(kGeneratorName));
  EXPECT_EQ(parse_config(j["config"].get<std::string>()), cfg);
  EXPECT_FALSE(j["expected_coincidences"].empty());
}

TEST(Counts, FilesAreByteStable) {
  const auto cfg = counting(500'000, 5);
  const auto dir = scratch("stable");
  const auto a = write_counts(cmd_counts(cfg), dir / "a", {"csv", "json"});
  const auto b = write_counts(cmd_counts(cfg), dir / "b", {"csv", "json"});
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(slurp(a[i]), slurp(b[i])) << a[i];
  EXPECT_THROW((void)write_counts(cmd_counts(cfg), dir / "c", {"xml"}), std::invalid_argument);
  fs::remove_all(dir);
}

// --- sweep -------------------------------------------------------------------

TEST(Sweep, CoincidenceColumnIsFlatAndDetectorColumnIsNot) {
  const auto res = cmd_sweep(counting(1, 0), SweepAxis::phase, parse_grid("", SweepAxis::phase));
  const auto rows = read_csv(res.csv);
  ASSERT_EQ(rows.size(), 10u);
  const auto pair = column(rows[0], "pair_B_D");
  const auto det = column(rows[0], "p_DET1");
  double lo = 1, hi = 0, dlo = 1, dhi = 0;
  std::size_t argmin = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double v = std::stod(rows[r][pair]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const double d = std::stod(rows[r][det]);
    if (d < dlo) dlo = d, argmin = r;
    dhi = std::max(dhi, d);
  }
  EXPECT_LT(hi - lo, 1e-12);
  EXPECT_GT(dhi / dlo, 5.0);
  EXPECT_EQ(std::stod(rows[argmin][0]), 0.0);  // the tuned point is the darkest
}

TEST(Sweep, EpsilonExponents) {
  const auto res = cmd_sweep(counting(1, 0), SweepAxis::epsilon, parse_grid("1e-6:1e-2:9", SweepAxis::epsilon));
  for (const auto& [id, slope] : res.exponents) {
    if (id == "D" || id == "E") {
      EXPECT_NEAR(slope, 2.0, 0.1) << id;
    } else {
      EXPECT_NEAR(slope, 1.0, 0.05) << id;
    }
  }
  EXPECT_EQ(read_csv(res.csv).size(), 10u);
}

TEST(Sweep, GridSpecs) {
  EXPECT_EQ(parse_grid("0:1:3", SweepAxis::phase), (std::vector{0.0, 0.5, 1.0}));
  const auto g = parse_grid("1e-4:1e-2:3", SweepAxis::epsilon);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g[1], 1e-3, 1e-15);
  EXPECT_EQ(parse_grid("0.1, 0.2,0.3", SweepAxis::phase), (std::vector{0.1, 0.2, 0.3}));
  EXPECT_EQ(parse_grid("", SweepAxis::phase).size(), 9u);
  EXPECT_THROW((void)parse_grid("0:1", SweepAxis::phase), std::invalid_argument);
  EXPECT_THROW((void)parse_grid("0:1:1", SweepAxis::phase), std::invalid_argument);
  EXPECT_THROW((void)parse_grid("a,b", SweepAxis::phase), std::invalid_argument);
  EXPECT_THROW((void)parse_grid("0.5,2", SweepAxis::epsilon), std::invalid_argument);
  EXPECT_THROW((void)parse_sweep_axis("time"), std::invalid_argument);
}

// --- the executable ----------------------------------------------------------

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const char* exe = cli_path();
  Run r;
  if (exe == nullptr) return r;
  const std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = ::pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string config(const std::string& name) {
  const char* dir = configs_dir();
  return dir ? std::string(dir) + "/" + name : name;
}

class Executable : public ::testing::Test {
 protected:
  void SetUp() override {
    if (cli_path() == nullptr || configs_dir() == nullptr) {
      GTEST_SKIP() << "nmzi executable unknown";
    }
  }
};

TEST_F(Executable, ListsClaimsWithoutRunning) {
  const auto r = run("verify --list");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("dark-port"), std::string::npos);
  EXPECT_EQ(r.out.find("PASS"), std::string::npos);
}

TEST_F(Executable, DetunedPhaseFailsTheDarkPortClaim) {
  const auto r = run("verify --config " + config("detuned.toml"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL dark-port"), std::string::npos);
}

TEST_F(Executable, ConfigAndUsageErrorsExitWithTwo) {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.toml") << "[interferometer]\npreset = \"nope\"\n";
  EXPECT_EQ(run("simulate --config " + (dir / "bad.toml").string()).status, 2);
  EXPECT_EQ(run("simulate --config " + (dir / "missing.toml").string()).status, 2);
  EXPECT_EQ(run("sweep --config " + config("fig1d.toml") + " --sweep time").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("simulate").status, 2);
  EXPECT_EQ(run("simulate --config " + config("fig1d.toml") + " --engine gpu").status, 2);
  fs::remove_all(dir);
}

TEST_F(Executable, SimulateWritesJsonToStdout) {
  const auto r = run("simulate --config " + config("w_arm_c.toml"));
  ASSERT_EQ(r.status, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["probes"][0]["amplitudes"][1][0].get<double>(), 0.01, 1e-12);
}

TEST_F(Executable, CountsHonoursSeedOutAndFormat) {
  const auto dir = scratch("counts");
  const std::string base = "counts --config " + config("explicit_elements.toml") + " --out " + dir.string();
  ASSERT_EQ(run(base + "/a --seed 1 --format csv").status, 0);
  ASSERT_EQ(run(base + "/b --seed 1 --format csv").status, 0);
  ASSERT_EQ(run(base + "/c --seed 2 --format csv --format json").status, 0);
  EXPECT_TRUE(fs::exists(dir / "a" / "counts.csv"));
  EXPECT_FALSE(fs::exists(dir / "a" / "coincidences.json"));
  EXPECT_TRUE(fs::exists(dir / "c" / "coincidences.json"));
  EXPECT_EQ(slurp(dir / "a" / "counts.csv"), slurp(dir / "b" / "counts.csv"));
  EXPECT_NE(slurp(dir / "a" / "counts.csv"), slurp(dir / "c" / "counts.csv"));
  fs::remove_all(dir);
}

TEST_F(Executable, SweepPrintsCsv) {
  const auto r = run("sweep --config " + config("w_arm_bc.toml") + " --sweep phase --grid 0,3.141592653589793");
  ASSERT_EQ(r.status, 0);
  const auto rows = read_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "phi");
}

}  // namespace
}  // namespace nmzi
