// Copyright 2026 The relurep Authors. All Rights Reserved.
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

#include "relurep/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "relurep/errors.hpp"

namespace relurep {
namespace {

namespace fs = std::filesystem;

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

TEST(ConfigTest, ParsesFullConfig) {
  const auto cfg = parse_config(R"(# representation sweep
task = rep_learning
d = 50, 100
n = 2d
k = 5
gamma = 1
nu = auto
bias = exp:rate=1,shift=-2   # trailing comment
seeds = 1..3, 10
fill = upper
output_dir = out/rep
c0 = 2
)");
  EXPECT_EQ(cfg.task, Task::kRepLearning);
  EXPECT_EQ(cfg.d, (std::vector<Eigen::Index>{50, 100}));
  EXPECT_EQ(cfg.n.resolve(50), (std::vector<Eigen::Index>{100}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3, 10}));
  EXPECT_FALSE(cfg.nu.has_value());
  EXPECT_EQ(cfg.fill, FillStrategy::kUpperBoundary);
  EXPECT_EQ(cfg.output_dir, fs::path("out/rep"));
  EXPECT_EQ(cfg.bias, "exp:rate=1,shift=-2");
}

TEST(ConfigTest, RulesRoundUp) {
  DimRule s{{}, 0.02};
  EXPECT_EQ(s.resolve(250).front(), 5);
  EXPECT_EQ(s.resolve(500).front(), 10);
  EXPECT_EQ(s.resolve(1010).front(), 21);
  const auto cfg = parse_config("task = robust_recovery\nd = 100\nk = 3\ns = 4,8\nseeds = 1\nlambda = 0.01\n");
  EXPECT_EQ(cfg.s.resolve(100), (std::vector<Eigen::Index>{4, 8}));
  EXPECT_EQ(cfg.lambda_mode, LambdaMode::kExplicit);
  EXPECT_EQ(cfg.lambda, 0.01);
}

TEST(ConfigTest, ErrorsNameTheKey) {
  const std::string base = "task = rep_learning\nd = 10\nk = 2\nseeds = 1\n";
  EXPECT_EQ(config_error_key(base + "dimension = 3\n"), "dimension");
  EXPECT_EQ(config_error_key(base + "gamma = -1\n"), "gamma");
  EXPECT_EQ(config_error_key(base + "gamma = abc\n"), "gamma");
  EXPECT_EQ(config_error_key(base + "d = 20\n"), "d");
  EXPECT_EQ(config_error_key("task = rep_learning\nd = 10\nk = 2\nseeds = 1,1\n"), "seeds");
  EXPECT_EQ(config_error_key("task = rep_learning\nd = 10\nk = 2\n"), "seeds");
  EXPECT_EQ(config_error_key("d = 10\nk = 2\nseeds = 1\n"), "task");
  EXPECT_EQ(config_error_key(base + "bias = const:b0=1\n"), "bias");
  EXPECT_EQ(config_error_key(base + "fill = sideways\n"), "fill");
  EXPECT_EQ(config_error_key(base + "lambda = -2\n"), "lambda");
  EXPECT_EQ(config_error_key(base + "just some words\n"), "just some words");
  EXPECT_EQ(config_error_key(base + "n = xd\n"), "n");
  EXPECT_EQ(config_error_key("task = nope\n"), "task");
}

ExperimentConfig small_rep_config() {
  return parse_config("task = rep_learning\nd = 50, 100\nk = 5\nseeds = 1, 2\n");
}

TEST(SweepTest, ProductCountAndOrder) {
  const auto records = run_sweep(small_rep_config());
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].d, 50);
  EXPECT_EQ(records[0].seed, 1u);
  EXPECT_EQ(records[1].seed, 2u);
  EXPECT_EQ(records[2].d, 100);
  for (const auto& r : records) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(*r.n, 2 * r.d);
    ASSERT_TRUE(r.frob_err_sq.has_value());
    EXPECT_TRUE(std::isfinite(*r.frob_err_sq));
    EXPECT_TRUE(r.rep_bound.has_value());
  }
}

TEST(SweepTest, DeterministicBytes) {
  const auto cfg = small_rep_config();
  EXPECT_EQ(results_csv(run_sweep(cfg)), results_csv(run_sweep(cfg)));
}

TEST(SweepTest, RecoveryColumnsPopulated) {
  const auto cfg = parse_config(
      "task = robust_recovery\nd = 250, 500\nk = 10\ns = 0.02d\ndelta = 0.01\nseeds = 1..2\n");
  const auto records = run_sweep(cfg);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_TRUE(r.recovery_error.has_value());
    EXPECT_TRUE(r.recovery_bound.has_value());
    EXPECT_EQ(*r.mu, 0.5);
    EXPECT_TRUE(*r.converged);
  }
  EXPECT_EQ(*records[0].s, 5);
  EXPECT_EQ(*records[2].s, 10);
}

TEST(SweepTest, CellFailuresAreRecorded) {
  // k > d: generation fails for that cell, the sweep carries on.
  const auto cfg = parse_config("task = robust_recovery\nd = 4, 100\nk = 6\ns = 0\nseeds = 1\n");
  const auto records = run_sweep(cfg);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_FALSE(records[0].error.empty());
  EXPECT_TRUE(records[1].error.empty());
}

TEST(EmitTest, CsvSchemaIsStable) {
  const std::string header =
      "task,d,n,k,s,gamma,nu,delta,bias,lambda_mode,fill,seed,frob_err_sq,"
      "rep_bound,rep_bound_vacuous,sin_theta,procrustes_err,yu_bound,"
      "realized_nu,total_loglik,recovery_error,recovery_bound,mu,sigma,eta,"
      "lambda_used,iterations,converged,num_checked,num_violations,min_ratio,"
      "error";
  const auto csv = results_csv({});
  EXPECT_EQ(csv, header + "\n");
}

TEST(EmitTest, QuotingFollowsRfc4180) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(EmitTest, WritesFilesAndRefusesOverwrite) {
  const fs::path dir = fs::temp_directory_path() / "relurep_emit_test";
  fs::remove_all(dir);
  const auto records = run_sweep(small_rep_config());
  emit_results(records, dir);
  std::ifstream in(dir / "results.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 5u);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "timings.csv"));
  EXPECT_THROW(emit_results(records, dir), IoError);
  EXPECT_NO_THROW(emit_results(records, dir, true));
  EXPECT_THROW(emit_results({}, dir, true), InvalidArgumentError);
  fs::remove_all(dir);
}

TEST(EmitTest, SummaryGroupsByDimensions) {
  const auto summary = summary_json(run_sweep(small_rep_config()));
  std::size_t groups = 0;
  for (std::size_t pos = 0; (pos = summary.find("\"runs\"", pos)) != std::string::npos; ++pos) {
    ++groups;
  }
  EXPECT_EQ(groups, 2u);
  EXPECT_NE(summary.find("\"median\""), std::string::npos);
  EXPECT_NE(summary.find("\"iqr\""), std::string::npos);
}

}  // namespace
}  // namespace relurep
