// Copyright 2026 The tanco Authors
//
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tanco/cli/cli.hpp"

namespace tanco::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tanco");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tanco_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

TEST_F(CliTest, DoubleIntegratorRun) {
  const auto r = invoke({"run", "--problem", "double-integrator", "--segments", "8", "--degree", "4",
                         "--out-dir", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("defect_norm="), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_NEAR(report.at("solve").at("objective").get<double>(), 12.0, 1e-6);
  EXPECT_EQ(report.at("solve").at("status"), "converged");
  EXPECT_FALSE(report.at("solve").contains("wall_time_s"));
  EXPECT_EQ(report.at("mesh")[0].at("segments"), 8);
  EXPECT_EQ(report.at("counts").at("variables"), report.at("counts").at("formula_variables"));

  std::istringstream csv(slurp(dir_ / "trajectory.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,phase,y,v,u");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 8 * 10 + 1);
}

TEST_F(CliTest, BaselineReportsSurplus) {
  const auto r = invoke({"run", "--problem", "attitude", "--variant", "normalization-baseline",
                         "--segments", "3", "--degree", "3", "--out-dir", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = nlohmann::json::parse(slurp(dir_ / "report.json")).at("counts");
  EXPECT_EQ(c.at("surplus_constraints"), 3 * 3 * 4);
  EXPECT_EQ(c.at("normalization_rows"), 3 * 3 * 4);
  EXPECT_EQ(c.at("equalities").get<int>(), c.at("formula_equalities").get<int>() +
                                               c.at("boundary_rows").get<int>() +
                                               c.at("normalization_rows").get<int>());
}

TEST_F(CliTest, UnknownProblemIsUsageError) {
  const auto r = invoke({"run", "--problem", "pendulum", "--out-dir", out()});
  EXPECT_EQ(r.code, 2);
  for (const char* n : {"double-integrator", "attitude", "srb-pose", "bouncing-mass"}) {
    EXPECT_NE(r.err.find(n), std::string::npos) << n;
  }
  EXPECT_FALSE(fs::exists(dir_ / "report.json"));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({"run", "--variant", "ambient"}).code, 2);
  EXPECT_EQ(invoke({"run", "--segments", "0"}).code, 2);
  EXPECT_EQ(invoke({"run", "--feas-tol", "-1"}).code, 2);
  EXPECT_EQ(invoke({"run", "--no-such-flag"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--parameter", "tolerance", "--values", "1"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--values", "2,x"}).code, 2);
}

TEST_F(CliTest, SolverFailureStillWritesReport) {
  const auto r = invoke({"run", "--problem", "attitude", "--feas-tol", "1e-300", "--opt-tol", "1e-300",
                         "--out-dir", out()});
  EXPECT_EQ(r.code, 1);
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_NE(report.at("solve").at("status"), "converged");
  EXPECT_TRUE(fs::exists(dir_ / "trajectory.csv"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  fs::create_directories(dir_);
  {
    std::ofstream f(dir_ / "run.cfg");
    f << "problem=bouncing-mass\nsegments=3\ndegree=2\nfeas-tol=1e-9\nsamples-per-segment=4\n";
  }
  const auto r = invoke({"run", "--config", (dir_ / "run.cfg").string(), "--segments", "2", "--out-dir",
                         out("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = nlohmann::json::parse(slurp(dir_ / "o" / "report.json"));
  EXPECT_EQ(report.at("problem"), "bouncing-mass");
  EXPECT_EQ(report.at("mesh")[0].at("segments"), 2);
  EXPECT_EQ(report.at("mesh")[0].at("state_degree"), 2);
  EXPECT_EQ(report.at("feas_tol"), 1e-9);
  EXPECT_EQ(report.at("samples_per_segment"), 4);
  EXPECT_EQ(report.at("mesh").size(), 3u);
}

TEST_F(CliTest, OutputsAreDeterministic) {
  const std::vector<std::string> base{"run", "--problem", "srb-pose", "--segments", "2", "--degree", "3"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out-dir", out("a")});
  b.insert(b.end(), {"--out-dir", out("b")});
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
  EXPECT_EQ(slurp(dir_ / "a" / "trajectory.csv"), slurp(dir_ / "b" / "trajectory.csv"));
}

TEST_F(CliTest, DegreeSweep) {
  const auto r = invoke({"sweep", "--problem", "attitude", "--parameter", "degree", "--values", "2,3,4",
                         "--out-dir", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(dir_ / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "value,cost_error,defect_norm,iterations,wall_ms");
  std::vector<double> errs;
  for (int v = 2; std::getline(csv, line); ++v) {
    EXPECT_EQ(std::stoi(line), v);
    const auto c1 = line.find(',');
    errs.push_back(std::stod(line.substr(c1 + 1)));
  }
  ASSERT_EQ(errs.size(), 3u);
  for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_LE(errs[i], std::max(errs[i - 1], 1e-12));
}

TEST_F(CliTest, EmptySweep) {
  const auto r = invoke({"sweep", "--values", "", "--out-dir", out()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "sweep.csv"), "value,cost_error,defect_norm,iterations,wall_ms\n");
}

TEST_F(CliTest, SchemeTable) {
  const auto r = invoke({"scheme", "--degree", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("degree 3"), std::string::npos);
  EXPECT_EQ(invoke({"scheme", "--degree", "0"}).code, 2);
}

TEST_F(CliTest, AuditFlag) {
  const auto r = invoke({"run", "--problem", "bouncing-mass", "--audit-jacobians", "--out-dir", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(slurp(dir_ / "report.json")).at("solve");
  ASSERT_TRUE(s.contains("audit_max_relative_error"));
  EXPECT_LT(s.at("audit_max_relative_error").get<double>(), 1e-5);
}

}  // namespace
}  // namespace tanco::cli
