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

#include <string>
#include <string_view>
#include <vector>

#include "relurep/nonlinearity.hpp"
#include "relurep/relu_generative.hpp"

namespace relurep {

enum class LambdaMode { kExplicit, kOracle, kAgnostic };

std::string to_string(LambdaMode mode);

struct LassoConfig {
  double lambda = 0.0;
  LambdaMode mode = LambdaMode::kExplicit;
  double tol = 1e-10;  // relative objective change
  int max_iter = 1000;
};

struct LassoSolution {
  Vector c_hat;
  Vector e_hat;
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
};

// sign(x_i) max(|x_i| - tau, 0).
Vector soft_threshold(const Vector& x, double tau);

// (1/2d) ||v - A c - e||^2 + lambda ||e||_1.
double lasso_objective(const Vector& v, const Matrix& A, const Vector& c,
                       const Vector& e, double lambda);

// Exact block coordinate descent: c from least squares (one QR of A), e from
// the proximal map with threshold d * lambda. cfg.lambda must already hold
// the resolved value; the mode is informational here.
LassoSolution solve_robust_lasso(const Vector& v, const Matrix& A,
                                 const LassoConfig& cfg);

// 2 ||z + w||_inf / d with z = relu(A c* + b) - mu A c*. Returns 1e-12 when
// that is zero.
double oracle_lambda(const RecoveryInstance& instance,
                     const NonlinearityStats& stats);

// 4 (sigma sqrt(2 log 2d) + delta) / d.
double agnostic_lambda(Eigen::Index d, double sigma, double delta);

struct RecoveryErrorBound {
  double error = 0.0;  // ||mu c* - c_hat|| + ||e* - e_hat|| / sqrt(d)
  double bound = 0.0;  // C max{sqrt(k log k / d), sqrt(s log d / d)}
};

// k log k is replaced by k when k == 1.
double recovery_bound(Eigen::Index k, Eigen::Index s, Eigen::Index d,
                      double c_tilde);

RecoveryErrorBound recovery_error_and_bound(const LassoSolution& sol,
                                            const RecoveryInstance& instance,
                                            const NonlinearityStats& stats,
                                            double c_tilde);

struct KktResiduals {
  // ||(1/d) A^T (A c + e - v)||_inf
  double stationarity_c = 0.0;
  // Worst violation of the subgradient condition over the coordinates of e.
  double stationarity_e = 0.0;
};

KktResiduals kkt_residuals(const Vector& v, const Matrix& A,
                           const LassoSolution& sol, double lambda);

}  // namespace relurep
