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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relurep/nonlinearity.hpp"
#include "relurep/random.hpp"
#include "relurep/relu_generative.hpp"
#include "relurep/representation_learning.hpp"
#include "relurep/restricted_set.hpp"
#include "relurep/robust_lasso.hpp"
#include "relurep/subspace.hpp"

namespace relurep {

enum class Task { kRepLearning, kRobustRecovery, kDiagnostics };

std::string to_string(Task task);

// A dimension given either as an explicit list or as a multiple of d
// ("2d", "0.02d"), rounded up.
struct DimRule {
  std::vector<Eigen::Index> values;
  std::optional<double> factor_of_d;

  std::vector<Eigen::Index> resolve(Eigen::Index d) const;
};

struct ExperimentConfig {
  Task task = Task::kRepLearning;
  std::vector<Eigen::Index> d;
  DimRule n{{}, 2.0};
  std::vector<Eigen::Index> k;
  DimRule s{{}, 0.02};
  double gamma = 1.0;
  std::optional<double> nu;  // unset: use each instance's realized margin
  double delta = 0.0;
  // "default" picks the exponential default for gamma (rep_learning) or
  // "const:b0=0" (recovery, diagnostics).
  std::string bias = "default";
  LambdaMode lambda_mode = LambdaMode::kOracle;
  double lambda = 0.0;  // used when lambda_mode == kExplicit
  std::vector<std::uint64_t> seeds;
  FillStrategy fill = FillStrategy::kMidpoint;
  std::filesystem::path output_dir = "results";
  double outlier_magnitude = 5.0;
  double c0 = 2.0;
  double c_tilde = 1.0;
  double tol = 1e-10;
  int max_iter = 1000;
  std::size_t samples = 100;
};

// Flat "key = value" lines, '#' starts a comment. Throws ConfigError naming
// the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

BiasModel resolve_rep_bias(const std::string& bias, double gamma);
BiasSpec resolve_recovery_bias(const std::string& bias);

// ----- shared pipelines (used by the sweep and by the CLI) -----

struct RepOutcome {
  EstimatedMatrix estimate;
  double nu = 0.0;  // margin used by the estimator
  BiasConstants constants;
  double frob_err_sq = 0.0;
  std::optional<double> rep_bound;  // empty when vacuous
  TruncatedSvd truth;
  TruncatedSvd estimated;
  double sin_theta = 0.0;
  double procrustes_err = 0.0;
  double yu_bound = 0.0;
};

// nu unset: the instance's realized margin.
RepOutcome run_rep_learning(const GenerativeInstance& instance,
                            const BiasModel& model, double gamma,
                            std::optional<double> nu, FillStrategy fill,
                            double c0 = 2.0,
                            Execution exec = Execution::kParallel);

struct RecoveryOutcome {
  LassoSolution solution;
  double lambda_used = 0.0;
  RecoveryErrorBound error_bound;
  KktResiduals kkt;
};

RecoveryOutcome run_recovery(const RecoveryInstance& instance,
                             const NonlinearityStats& stats, LambdaMode mode,
                             double explicit_lambda, double tol, int max_iter,
                             double c_tilde = 1.0);

struct DiagnosticsOutcome {
  RecoveryInstance instance;
  NonlinearityStats stats;
  double lambda = 0.0;
  RestrictedSetReport report;
};

DiagnosticsOutcome run_diagnostics(Eigen::Index d, Eigen::Index k,
                                   Eigen::Index s, double delta,
                                   const BiasSpec& bias,
                                   double outlier_magnitude,
                                   std::size_t samples, std::uint64_t seed);

// ----- sweep -----

struct ResultRecord {
  Task task = Task::kRepLearning;
  Eigen::Index d = 0;
  std::optional<Eigen::Index> n;
  Eigen::Index k = 0;
  std::optional<Eigen::Index> s;
  double gamma = 0.0;
  std::optional<double> nu;
  double delta = 0.0;
  std::string bias;
  std::string lambda_mode;
  std::string fill;
  std::uint64_t seed = 0;

  std::optional<double> frob_err_sq;
  std::optional<double> rep_bound;
  bool rep_bound_vacuous = false;
  std::optional<double> sin_theta;
  std::optional<double> procrustes_err;
  std::optional<double> yu_bound;
  std::optional<double> realized_nu;
  std::optional<double> total_loglik;

  std::optional<double> recovery_error;
  std::optional<double> recovery_bound;
  std::optional<double> mu;
  std::optional<double> sigma;
  std::optional<double> eta;
  std::optional<double> lambda_used;
  std::optional<int> iterations;
  std::optional<bool> converged;

  std::optional<std::size_t> num_checked;
  std::optional<std::size_t> num_violations;
  std::optional<double> min_ratio;

  std::string error;  // empty on success
  double wall_time_ms = 0.0;
};

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config,
                                    Execution exec = Execution::kParallel);

// Fixed column order of results.csv.
const std::vector<std::string>& result_columns();

// results.csv text (header + one line per record). Wall time is left out so
// that identical configs give identical bytes.
std::string results_csv(const std::vector<ResultRecord>& records);
std::string timings_csv(const std::vector<ResultRecord>& records);
std::string summary_json(const std::vector<ResultRecord>& records);

// Writes results.csv, summary.json and timings.csv. Refuses to overwrite an
// existing results.csv unless `force`.
void emit_results(const std::vector<ResultRecord>& records,
                  const std::filesystem::path& output_dir, bool force = false);

// RFC 4180 field quoting.
std::string csv_field(std::string_view value);

}  // namespace relurep
