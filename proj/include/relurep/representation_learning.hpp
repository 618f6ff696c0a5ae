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

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relurep/bias_models.hpp"
#include "relurep/extended_real.hpp"
#include "relurep/random.hpp"
#include "relurep/relu_generative.hpp"

namespace relurep {

// The positive ("uncensored") part of one row of Y.
struct RowObservation {
  Eigen::Index index = 0;
  Eigen::Index n = 0;                   // row length
  std::vector<Eigen::Index> support;    // ascending column indices
  std::vector<double> positive_values;  // sorted descending
  // Column holding the smallest positive observation, when s >= 1.
  std::optional<Eigen::Index> min_pos_column;

  Eigen::Index s() const { return static_cast<Eigen::Index>(support.size()); }
  // Y_{i,(s)}; only valid when s >= 1.
  double y_min_pos() const { return positive_values.back(); }
  double y_max() const { return positive_values.front(); }
};

RowObservation row_support(const Eigen::Ref<const Vector>& y_row,
                           Eigen::Index index = 0);

// Closed interval of bias values beta for which the row can be completed to
// a matrix of the constraint set: support entries Y_ij - beta must lie in
// [-gamma, gamma] and the smallest of them must clear every off-support
// entry (each >= -gamma) by nu. The margin term is dropped when s == n.
struct FeasibleInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double beta, double tol = 0.0) const {
    return beta >= lo - tol && beta <= hi + tol;
  }
};

FeasibleInterval feasible_bias_interval(const RowObservation& row,
                                        double gamma, double nu);

enum class RowStatus { kInterior, kBoundary, kEmptySupportRow };

struct RowMle {
  double beta_hat = 0.0;
  FeasibleInterval feasible;
  ExtendedReal loglik;
  RowStatus status = RowStatus::kBoundary;
};

// log p(x), or -inf where the density vanishes.
ExtendedReal log_density(const BiasModel& model, double x);

// Per-row term of the normalized log-likelihood for a row with s >= 1:
// log p(beta) - log p(Y_{i,(s)}). Throws InfeasibleMatrixError if beta is
// outside the feasible interval.
ExtendedReal row_log_likelihood(const RowObservation& row, double beta,
                                const BiasModel& model, double gamma,
                                double nu);

// Per-row term for an all-zero row whose largest reconstructed entry is
// x_star: log F(inf, x_star) - log F(inf, 0).
ExtendedReal empty_row_log_likelihood(double x_star, const BiasModel& model);

// Maximizes log p(beta) over the feasible interval: 1000-point scan, then
// golden-section refinement to 1e-10 width around the best scan point. Ties
// go to the density's mode when it is feasible, then to the lower end.
// Requires s >= 1.
RowMle estimate_row_bias(const RowObservation& row, const BiasModel& model,
                         double gamma, double nu);

enum class FillStrategy { kUpperBoundary, kLowerBoundary, kMidpoint };

FillStrategy parse_fill_strategy(std::string_view name);  // upper|lower|mid
std::string to_string(FillStrategy fill);

struct EstimatedMatrix {
  Matrix M_hat;
  // Bias estimate per row; empty for rows with no positive observation.
  std::vector<std::optional<double>> beta_hats;
  std::vector<RowStatus> row_status;
  std::vector<ExtendedReal> row_loglik;
  FillStrategy fill = FillStrategy::kMidpoint;
  ExtendedReal total_loglik;
  double gamma = 0.0;
  double nu = 0.0;
};

// Solves the constrained maximum-likelihood program row by row and
// assembles M_hat. kParallel distributes rows over OpenMP threads; the
// result is identical to kSerial.
EstimatedMatrix reconstruct_matrix(const Matrix& Y, const BiasModel& model,
                                   double gamma, double nu, FillStrategy fill,
                                   Execution exec = Execution::kParallel);

// Describes the first way in which X fails to belong to the constraint set
// for observation Y, or nullopt if it belongs. Equalities are checked to
// within tol.
std::optional<std::string> find_constraint_violation(const Matrix& X,
                                                     const Matrix& Y,
                                                     double gamma, double nu,
                                                     double tol = 1e-9);

// Normalized log-likelihood difference L(M) - L(X), summed over rows.
ExtendedReal log_likelihood_gap(const Matrix& M, const Matrix& X,
                                const Matrix& Y, const BiasModel& model,
                                double gamma, double nu);

// C0 * L * gamma * d / (beta * omega). Throws VacuousBoundError when beta or
// omega is zero.
double theoretical_rep_bound(const BiasConstants& constants, Eigen::Index d,
                             double c0 = 2.0);

}  // namespace relurep
