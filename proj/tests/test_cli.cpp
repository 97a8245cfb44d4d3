// Copyright 2026 The qmemsim Authors
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qmemsim/cli.hpp"
#include "qmemsim/config.hpp"

namespace qmemsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qmemsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Config, MinimalConfigGetsDefaults) {
  const ExperimentConfig c = config_from_json(json::parse(R"({"seed": 42})"));
  EXPECT_EQ(c.seed, 42u);
  EXPECT_DOUBLE_EQ(c.mot_rate, 20.0);
  EXPECT_EQ(c.trials_per_cycle, 250);
  EXPECT_DOUBLE_EQ(c.filter_transmission, 0.30);
  EXPECT_DOUBLE_EQ(c.detector_efficiency, 0.50);
  EXPECT_DOUBLE_EQ(c.storage_time, 1e-6);
  EXPECT_DOUBLE_EQ(c.source.heralding_efficiency, 0.10);
  EXPECT_FALSE(c.background_mean.has_value());
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    config_from_json(json::parse(R"({"seed": 1, "odd_field": 3})"));
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("odd_field"), std::string::npos);
  }
  try {
    config_from_json(json::parse(R"({"memory": {"odd_field": 3}})"));
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("memory.odd_field"), std::string::npos);
  }
}

TEST(Config, TypeAndRangeErrors) {
  EXPECT_THROW(config_from_json(json::parse(R"({"mot_rate": "fast"})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"trials_per_cycle": 2.5})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"memory": 3})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"filter_transmission": 1.5})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"seed": -1})")), ConfigError);
}

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.seed = 99;
  c.background_mean = 0.002;
  c.memory.od = 321.0;
  c.od_grid = {10, 20};
  const json emitted = config_to_json(c);
  const ExperimentConfig back = config_from_json(emitted);
  EXPECT_EQ(config_to_json(back), emitted);
  EXPECT_EQ(config_digest(back), config_digest(c));
}

TEST(Config, DigestIgnoresKeyOrder) {
  const auto a = config_from_json(json::parse(R"({"seed": 3, "memory": {"od": 400, "gamma0": 1e4}})"));
  const auto b = config_from_json(json::parse(R"({"memory": {"gamma0": 1e4, "od": 400}, "seed": 3})"));
  EXPECT_EQ(config_digest(a), config_digest(b));
  const auto c = config_from_json(json::parse(R"({"seed": 4})"));
  EXPECT_NE(config_digest(a), config_digest(c));
  EXPECT_EQ(config_digest(a).size(), 16u);
}

TEST(Config, Overrides) {
  json tree = json::object();
  apply_override(tree, "memory.od=250");
  apply_override(tree, "seed=7");
  apply_override(tree, "repeater.memory_efficiencies=[0.5,0.9]");
  const ExperimentConfig c = config_from_json(tree);
  EXPECT_DOUBLE_EQ(c.memory.od, 250.0);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.repeater.memory_efficiencies.size(), 2u);
  EXPECT_THROW(apply_override(tree, "no_equals"), ConfigError);
  EXPECT_THROW(apply_override(tree, "a..b=1"), ConfigError);
}

TEST(Config, FileErrors) {
  EXPECT_THROW(parse_config("/nonexistent/qmemsim.json"), ConfigError);
  const fs::path dir = scratch("badfile");
  std::ofstream(dir / "bad.json") << "{\n  \"seed\": 1,\n  oops\n}";
  try {
    parse_config(dir / "bad.json");
    FAIL() << "no error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Cli, UnknownCommand) {
  const CliRun r = cli({"teleport"});
  EXPECT_EQ(r.code, kExitUsage);
  const json err = json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "usage");
  EXPECT_NE(err["error"]["message"].get<std::string>().find("teleport"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"hbt", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"hbt", "--config", "/nonexistent.json"}).code, kExitUsage);
  const CliRun r = cli({"hbt", "--set", "odd_field=1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("odd_field"), std::string::npos);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, RuntimeErrorIsReported) {
  const fs::path dir = scratch("runtime");
  const CliRun r = cli({"reproduce-fig2c", "--out", dir.string(), "--set", "memory.od=0",
                     "--set", "od_grid=[0]"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_EQ(json::parse(r.err)["error"]["kind"], "runtime");
}

TEST(Cli, RepeaterArtifactsAreReproducible) {
  const fs::path a = scratch("rep_a");
  const fs::path b = scratch("rep_b");
  const std::vector<std::string> common{"--seed", "5", "--set", "run.repeater_runs=300", "--workers", "2"};
  auto args = [&](const fs::path& out) {
    std::vector<std::string> v{"repeater", "--out", out.string()};
    v.insert(v.end(), common.begin(), common.end());
    return v;
  };
  const CliRun ra = cli(args(a));
  const CliRun rb = cli(args(b));
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  ASSERT_EQ(rb.code, kExitOk) << rb.err;
  for (const char* f : {"repeater.csv", "repeater.json", "config.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const json manifest = json::parse(slurp(a / "manifest.json"));
  EXPECT_EQ(manifest["command"], "repeater");
  EXPECT_EQ(manifest["seed"], 5);
  const std::string digest = manifest["config_digest"];
  EXPECT_EQ(slurp(a / "repeater.csv").rfind("# config_digest: " + digest, 0), 0u);
  EXPECT_EQ(json::parse(slurp(a / "repeater.json"))["config_digest"], digest);
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
  EXPECT_EQ(json::parse(ra.out)["config_digest"], digest);
}

TEST(Cli, EfficiencyCurveWritesCsv) {
  const fs::path dir = scratch("curve");
  const CliRun r = cli({"efficiency-curve", "--out", dir.string(), "--set", "od_grid=[50,100]"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream f(dir / "efficiency_curve.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line.rfind("# config_digest: ", 0), 0u);
  std::getline(f, line);
  EXPECT_EQ(line.rfind("od,efficiency,", 0), 0u);
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, TomographySmallRun) {
  const fs::path dir = scratch("tomo");
  const CliRun r = cli({"tomography", "--out", dir.string(), "--workers", "4",
                     "--set", "run.pij_trials_input=20000000", "--set", "run.pij_trials_output=20000000",
                     "--set", "run.fringe_trials_per_point=2000000", "--set", "run.fringe_points=8"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json t = json::parse(slurp(dir / "tomography.json"));
  EXPECT_GT(t["report"]["input"]["concurrence"]["value"].get<double>(), 0.0);
  EXPECT_TRUE(t["report"]["eta"].contains("sigma_minus"));
}

TEST(Cli, HbtDefaultGrid) {
  const fs::path dir = scratch("hbt");
  const CliRun r = cli({"hbt", "--out", dir.string(), "--set", "run.hbt_trials=2000000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream f(dir / "hbt.csv");
  std::string line;
  std::getline(f, line);
  std::getline(f, line);
  EXPECT_EQ(line, "p1,chi,w_source,w_before,w_after");
  int rows = 0;
  while (std::getline(f, line)) {
    EXPECT_EQ(line.find("nan"), std::string::npos) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 5);
  EXPECT_TRUE(json::parse(slurp(dir / "hbt.json")).contains("output"));
}

}  // namespace
}  // namespace qmemsim
