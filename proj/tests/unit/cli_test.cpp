// Copyright 2026 The flexbound Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flexbound/analysis.hpp"
#include "flexbound/cli.hpp"
#include "flexbound/signals.hpp"
#include "flexbound/tariff.hpp"

namespace flexbound {
namespace {

namespace fs = std::filesystem;

const std::string kData = FLEXBOUND_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flexbound_cli_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "flexbound");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::main(int(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SolveConstantSignalShowsZeroSavings) {
  ASSERT_EQ(run({"solve", "--signal", kData + "/toy/constant_day.csv",
                 "--uptime-mode", "free", "--pc", "1.0", "--rte", "1.0",
                 "--out", dir_.string()}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("savings %        0.00"), std::string::npos)
      << out_.str();
  std::ifstream f(dir_ / "result.json");
  const auto doc = nlohmann::json::parse(f);
  EXPECT_EQ(doc["savings_pct"].get<double>(), 0.0);
  // The written schedule parses back and passes the feasibility check.
  const Schedule s = schedule_from_json(doc["schedule"]);
  FlexSpec spec = FlexSpec::flat(24);
  spec.uptime_mode = UptimeMode::kFree;
  spec.power_capacity = 1.0;
  EXPECT_TRUE(feasible(s, spec).feasible);
}

TEST_F(CliTest, SweepMatchesIndependentSolves) {
  const std::string signal = kData + "/toy/day_price.csv";
  ASSERT_EQ(run({"sweep", "--signal", signal, "--u-grid", "0.25,0.5,0.75,1.0",
                 "--pc-grid", "0,0.5,1.0", "--out", dir_.string()}),
            0)
      << err_.str();
  const auto rows = lines(slurp(dir_ / "surface.csv"));
  ASSERT_EQ(rows.size(), 13u);
  const auto c = load_signal_file(signal, SignalKind::kDamPrice).series.values;
  const Objective obj = Objective::linear(c);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double u, pc, pct;
    ASSERT_EQ(std::sscanf(rows[i].c_str(), "%lf,%lf,%lf", &u, &pc, &pct), 3);
    FlexSpec spec = FlexSpec::flat(24);
    spec.uptime = u;
    spec.power_capacity = pc;
    const double expected =
        *savings(baseline_value(obj, spec), solve(obj, spec).objective_value);
    EXPECT_DOUBLE_EQ(pct, expected) << rows[i];
  }
}

TEST_F(CliTest, AbatementTwoRowTable) {
  ASSERT_EQ(run({"abatement", "--cost", kData + "/toy/two_step.csv",
                 "--emissions", kData + "/toy/two_step_emissions.csv",
                 "--uptime", "0.5", "--pc", "1", "--fraction", "0.5,1.0",
                 "--out", dir_.string()}),
            0)
      << err_.str();
  const auto rows = lines(slurp(dir_ / "abatement.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2].rfind("1,1,1000,", 0), 0u) << rows[2];
  std::ifstream f(dir_ / "abatement.json");
  const auto doc = nlohmann::json::parse(f);
  EXPECT_EQ(doc["benchmarks"]["scc"], 140.0);
  EXPECT_EQ(doc["benchmarks"]["rec_low"], 1.0);
  EXPECT_EQ(doc["benchmarks"]["rec_high"], 20.0);
}

TEST_F(CliTest, EmitBaseline) {
  for (int steps : {24, 744, 1}) {
    ASSERT_EQ(run({"emit-baseline", "--steps", std::to_string(steps), "--mw",
                   "1.0", "--out", dir_.string()}),
              0);
    const auto s = load_signal_file(dir_ / "baseline.csv", SignalKind::kGeneric)
                       .series;
    EXPECT_EQ(s.size(), steps);
    EXPECT_EQ(s.values.sum(), double(steps));
  }
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"solve", "--signal", "/nonexistent.csv"}), 1);
  EXPECT_NE(err_.str().find("file not found"), std::string::npos);
  EXPECT_EQ(run({"solve", "--signal", kData + "/toy/day_price.csv", "--pc",
                 "2", "--out", dir_.string()}),
            1);
  EXPECT_EQ(run({"solve", "--bogus-flag"}), 1);
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"solve", "--signal", kData + "/toy/day_price.csv",
                 "--uptime", "0.5", "--pc-reference", "baseline", "--out",
                 dir_.string()}),
            2)
      << err_.str();
}

TEST_F(CliTest, MalformedInputsDoNotCrash) {
  const fs::path bad = dir_ / "bad.csv";
  std::ofstream(bad) << "timestamp,value\nnot-a-time,3\n";
  EXPECT_EQ(run({"solve", "--signal", bad.string(), "--out", dir_.string()}), 1);
  const fs::path badt = dir_ / "bad.json";
  std::ofstream(badt) << "{\"name\": 3";
  EXPECT_EQ(run({"solve", "--tariff", badt.string(), "--out", dir_.string()}), 1);
  const fs::path badc = dir_ / "cfg.json";
  std::ofstream(badc) << "[1,2]";
  EXPECT_EQ(run({"solve", "--config", badc.string()}), 1);
}

TEST_F(CliTest, DeterministicOutputs) {
  const std::vector<std::string> args{
      "pareto", "--cost", kData + "/caiso_july/dam.csv", "--emissions",
      kData + "/caiso_july/mef.csv", "--region", "CAISO", "--uptime", "0.5",
      "--pc", "0.5"};
  auto a = args;
  a.insert(a.end(), {"--out", (dir_ / "a").string()});
  auto b = args;
  b.insert(b.end(), {"--out", (dir_ / "b").string()});
  ASSERT_EQ(run(a), 0) << err_.str();
  ASSERT_EQ(run(b), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "pareto.csv"), slurp(dir_ / "b" / "pareto.csv"));
  EXPECT_GT(lines(slurp(dir_ / "a" / "pareto.csv")).size(), 3u);
}

TEST_F(CliTest, ConfigFilePrecedence) {
  const fs::path cfg = dir_ / "run.json";
  std::ofstream(cfg) << nlohmann::json{
      {"command", "solve"},
      {"signal", kData + "/toy/two_step.csv"},
      {"uptime", 0.5},
      {"pc", 0.0},
      {"out", (dir_ / "from_config").string()}}.dump();
  ASSERT_EQ(run({"--config", cfg.string()}), 0) << err_.str();
  std::ifstream f1(dir_ / "from_config" / "result.json");
  EXPECT_EQ(nlohmann::json::parse(f1)["objective_value"], 20.0);

  // A flag beats the file: full uptime gives the flat 40.
  ASSERT_EQ(run({"solve", "--config", cfg.string(), "--uptime", "1"}), 0);
  std::ifstream f2(dir_ / "from_config" / "result.json");
  EXPECT_EQ(nlohmann::json::parse(f2)["objective_value"], 40.0);

  // The echoed config replays to the same result.
  ASSERT_EQ(run({"--config", (dir_ / "from_config" / "config.json").string()}),
            0);
  std::ifstream f3(dir_ / "from_config" / "result.json");
  EXPECT_EQ(nlohmann::json::parse(f3)["objective_value"], 40.0);
}

TEST_F(CliTest, BillRoundTripsSolveOutput) {
  const std::string tariff = kData + "/tariffs/tou.json";
  ASSERT_EQ(run({"solve", "--tariff", tariff, "--uptime-mode", "free", "--pc",
                 "1", "--out", dir_.string()}),
            0)
      << err_.str();
  std::ifstream f(dir_ / "result.json");
  const auto solved = nlohmann::json::parse(f);
  ASSERT_EQ(run({"bill", "--tariff", tariff, "--schedule",
                 (dir_ / "result.json").string(), "--out", dir_.string()}),
            0)
      << err_.str();
  std::ifstream g(dir_ / "bill.json");
  const auto billed = nlohmann::json::parse(g);
  EXPECT_NEAR(billed["total"].get<double>(), solved["cost"].get<double>(),
              1e-9 * solved["cost"].get<double>());
}

TEST_F(CliTest, RteThreshold) {
  ASSERT_EQ(run({"rte-threshold", "--signal", kData + "/toy/two_step.csv",
                 "--uptime", "0.5", "--pc", "1", "--out", dir_.string()}),
            0);
  std::ifstream f(dir_ / "rte_threshold.json");
  EXPECT_NEAR(nlohmann::json::parse(f)["rte"].get<double>(), 0.5, 1e-4);
}

TEST_F(CliTest, LagrangianMethod) {
  ASSERT_EQ(run({"solve", "--signal", kData + "/toy/day_price.csv",
                 "--uptime-mode", "free", "--pc", "0.25", "--method",
                 "lagrangian", "--out", dir_.string()}),
            0)
      << err_.str();
  std::ifstream f(dir_ / "result.json");
  const auto doc = nlohmann::json::parse(f);
  EXPECT_LT(doc["diagnostics"]["max_violation"].get<double>(), 1e-8);
}

}  // namespace
}  // namespace flexbound
