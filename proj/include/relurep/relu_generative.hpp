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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relurep/bias_models.hpp"
#include "relurep/extended_real.hpp"

namespace relurep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Entrywise max(x, 0) for any Eigen matrix or vector expression.
template <class Derived>
auto relu_map(const Eigen::MatrixBase<Derived>& x) {
  return x.cwiseMax(typename Derived::Scalar(0));
}

// Deterministic bias b_i = value for every coordinate.
struct ConstantBias {
  double value = 0.0;
};

// The recovery problem accepts either a random law or a constant offset.
using BiasSpec = std::variant<ConstantBias, BiasModel>;

// Accepts the BiasModel grammar plus "const:b0=<real>".
BiasSpec parse_bias_spec(std::string_view config);
std::string to_config_string(const BiasSpec& spec);

struct GenerativeInstance {
  Matrix A;  // d x k weights
  Matrix C;  // k x n latent codes
  Vector b;  // one bias per output coordinate
  Matrix M;  // A C, rescaled so that max |M_ij| == gamma
  Matrix Y;  // relu(M + b 1^T)
  double gamma = 0.0;
  // min over rows of row_margins (rows with an all-zero or all-positive Y
  // row are excluded).
  double realized_nu = 0.0;
  std::vector<ExtendedReal> row_margins;
  std::uint64_t seed = 0;
  BiasModel bias = BiasModel::default_for_gamma(1.0);

  Eigen::Index d() const { return M.rows(); }
  Eigen::Index n() const { return M.cols(); }
  Eigen::Index k() const { return A.cols(); }
};

struct RepresentationParams {
  Eigen::Index d = 0;
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  double gamma = 1.0;
};

struct GenerationOptions {
  // When set, instances whose realized margin is below this are redrawn.
  std::optional<double> target_nu;
  int max_retries = 100;
};

GenerativeInstance generate_representation_instance(
    const RepresentationParams& params, const BiasModel& model,
    std::uint64_t seed, const GenerationOptions& options = {});

// Per-row gap min_{j in support} M_ij - max_{j off support} M_ij; +inf for
// rows whose Y row is all zero or all positive.
std::vector<ExtendedReal> row_margins(const Matrix& M, const Matrix& Y);

struct RecoveryInstance {
  Matrix A;       // d x k, i.i.d. standard normal
  Vector c_star;  // unit vector
  Vector b;
  Vector e_star;  // at most s nonzeros
  Vector w;       // |w_i| <= delta
  Vector v;       // relu(A c* + b) + e* + w
  std::vector<Eigen::Index> support;  // sorted indices of e*'s nonzeros
  Eigen::Index s = 0;
  double delta = 0.0;
  double outlier_magnitude = 0.0;
  std::uint64_t seed = 0;
  BiasSpec bias = ConstantBias{};

  Eigen::Index d() const { return A.rows(); }
  Eigen::Index k() const { return A.cols(); }
};

struct RecoveryParams {
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  Eigen::Index s = 0;
  double delta = 0.0;
  double outlier_magnitude = 5.0;
};

RecoveryInstance generate_recovery_instance(const RecoveryParams& params,
                                            const BiasSpec& bias,
                                            std::uint64_t seed);

}  // namespace relurep
