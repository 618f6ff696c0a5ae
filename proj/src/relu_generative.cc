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

#include "relurep/relu_generative.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "relurep/errors.hpp"
#include "relurep/random.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  // Column-major fill; the order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

GenerativeInstance draw_representation(const RepresentationParams& params,
                                       const BiasModel& model,
                                       std::uint64_t seed,
                                       std::uint64_t attempt) {
  auto weights_rng = make_stream(seed, Stream::kWeights, attempt);
  auto codes_rng = make_stream(seed, Stream::kCodes, attempt);
  auto bias_rng = make_stream(seed, Stream::kBias, attempt);

  GenerativeInstance inst;
  inst.A = standard_normal(params.d, params.k, weights_rng);
  inst.C = standard_normal(params.k, params.n, codes_rng);
  inst.M = inst.A * inst.C;

  Eigen::Index arg_row = 0;
  Eigen::Index arg_col = 0;
  const double max_abs = inst.M.cwiseAbs().maxCoeff(&arg_row, &arg_col);
  if (!(max_abs > 0.0)) {
    throw DegenerateInstanceError("A C is identically zero");
  }
  const double scale = params.gamma / max_abs;
  inst.M *= scale;
  // Pin the largest entry to exactly +/-gamma so the box constraint is
  // active; every other entry is already within it up to rounding.
  inst.M(arg_row, arg_col) = std::copysign(params.gamma, inst.M(arg_row, arg_col));
  inst.M = inst.M.cwiseMax(-params.gamma).cwiseMin(params.gamma);

  inst.b.resize(params.d);
  for (Eigen::Index i = 0; i < params.d; ++i) inst.b(i) = model.sample(bias_rng);

  inst.Y = relu_map((inst.M.colwise() + inst.b).eval());
  inst.gamma = params.gamma;
  inst.seed = seed;
  inst.bias = model;
  inst.row_margins = row_margins(inst.M, inst.Y);

  bool any_finite = false;
  double nu = 0.0;
  for (const auto& margin : inst.row_margins) {
    if (!margin.is_finite()) continue;
    nu = any_finite ? std::min(nu, margin.value()) : margin.value();
    any_finite = true;
  }
  if (!any_finite) {
    throw DegenerateInstanceError(
        "every row of Y is all-zero or all-positive; the margin nu is "
        "undefined");
  }
  inst.realized_nu = nu;
  return inst;
}

}  // namespace

BiasSpec parse_bias_spec(std::string_view config) {
  const std::string_view trimmed = text::trim(config);
  if (trimmed.rfind("const:", 0) == 0) {
    const std::string_view body = trimmed.substr(6);
    const auto eq = body.find('=');
    if (eq == std::string_view::npos || text::trim(body.substr(0, eq)) != "b0") {
      throw InvalidArgumentError("constant bias must read 'const:b0=<real>'");
    }
    const auto value = text::parse_double(body.substr(eq + 1));
    if (!value || !std::isfinite(*value)) {
      throw InvalidArgumentError("constant bias value is malformed");
    }
    return ConstantBias{*value};
  }
  return BiasModel::parse(trimmed);
}

std::string to_config_string(const BiasSpec& spec) {
  if (const auto* c = std::get_if<ConstantBias>(&spec)) {
    return "const:b0=" + text::format_double(c->value);
  }
  return std::get<BiasModel>(spec).to_config_string();
}

std::vector<ExtendedReal> row_margins(const Matrix& M, const Matrix& Y) {
  std::vector<ExtendedReal> margins(static_cast<std::size_t>(M.rows()),
                                    ExtendedReal::positive_infinity());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    double min_on = HUGE_VAL;
    double max_off = -HUGE_VAL;
    bool any_on = false;
    bool any_off = false;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (Y(i, j) > 0.0) {
        min_on = std::min(min_on, M(i, j));
        any_on = true;
      } else {
        max_off = std::max(max_off, M(i, j));
        any_off = true;
      }
    }
    if (any_on && any_off) {
      margins[static_cast<std::size_t>(i)] = ExtendedReal(min_on - max_off);
    }
  }
  return margins;
}

GenerativeInstance generate_representation_instance(
    const RepresentationParams& params, const BiasModel& model,
    std::uint64_t seed, const GenerationOptions& options) {
  if (params.d < 1 || params.n < 1 || params.k < 1) {
    throw InvalidArgumentError("d, n and k must be positive");
  }
  if (params.k > std::min(params.d, params.n)) {
    throw InvalidArgumentError("k must not exceed min(d, n)");
  }
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma)) {
    throw InvalidArgumentError("gamma must be positive and finite");
  }
  if (!options.target_nu) return draw_representation(params, model, seed, 0);

  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    auto inst = draw_representation(params, model, seed,
                                    static_cast<std::uint64_t>(attempt));
    if (inst.realized_nu >= *options.target_nu) return inst;
  }
  throw DegenerateInstanceError(
      "no instance reached the target margin nu=" +
      text::format_double(*options.target_nu) + " within " +
      std::to_string(options.max_retries) + " retries");
}

RecoveryInstance generate_recovery_instance(const RecoveryParams& params,
                                            const BiasSpec& bias,
                                            std::uint64_t seed) {
  if (params.d < 1 || params.k < 1) {
    throw InvalidArgumentError("d and k must be positive");
  }
  if (params.k > params.d) throw InvalidArgumentError("k must not exceed d");
  if (params.s < 0 || params.s > params.d) {
    throw InvalidArgumentError("s must lie in [0, d]");
  }
  if (!(params.delta >= 0.0)) throw InvalidArgumentError("delta must be >= 0");
  if (!(params.outlier_magnitude > 0.0)) {
    throw InvalidArgumentError("outlier magnitude must be positive");
  }

  const Eigen::Index d = params.d;
  RecoveryInstance inst;
  inst.s = params.s;
  inst.delta = params.delta;
  inst.outlier_magnitude = params.outlier_magnitude;
  inst.seed = seed;
  inst.bias = bias;

  auto weights_rng = make_stream(seed, Stream::kWeights);
  inst.A = standard_normal(d, params.k, weights_rng);

  auto signal_rng = make_stream(seed, Stream::kSignal);
  inst.c_star = standard_normal(params.k, 1, signal_rng);
  inst.c_star /= inst.c_star.norm();

  inst.b.resize(d);
  if (const auto* constant = std::get_if<ConstantBias>(&bias)) {
    inst.b.setConstant(constant->value);
  } else {
    auto bias_rng = make_stream(seed, Stream::kBias);
    const auto& model = std::get<BiasModel>(bias);
    for (Eigen::Index i = 0; i < d; ++i) inst.b(i) = model.sample(bias_rng);
  }

  // Outliers come from their own streams, independent of A and c*.
  std::vector<Eigen::Index> positions(static_cast<std::size_t>(d));
  std::iota(positions.begin(), positions.end(), Eigen::Index{0});
  auto support_rng = make_stream(seed, Stream::kOutlierSupport);
  std::shuffle(positions.begin(), positions.end(), support_rng);
  inst.support.assign(positions.begin(), positions.begin() + params.s);
  std::sort(inst.support.begin(), inst.support.end());

  auto sign_rng = make_stream(seed, Stream::kOutlierSign);
  std::bernoulli_distribution coin(0.5);
  inst.e_star = Vector::Zero(d);
  for (const Eigen::Index i : inst.support) {
    inst.e_star(i) = coin(sign_rng) ? params.outlier_magnitude
                                    : -params.outlier_magnitude;
  }

  inst.w = Vector::Zero(d);
  if (params.delta > 0.0) {
    auto noise_rng = make_stream(seed, Stream::kNoise);
    std::uniform_real_distribution<double> unif(-params.delta, params.delta);
    for (Eigen::Index i = 0; i < d; ++i) inst.w(i) = unif(noise_rng);
  }

  inst.v = relu_map((inst.A * inst.c_star + inst.b).eval()) + inst.e_star +
           inst.w;
  return inst;
}

}  // namespace relurep
