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

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "relurep/errors.hpp"

namespace relurep {
namespace {

const BiasModel kExpDefault = BiasModel::default_for_gamma(1.0);

TEST(ReluTest, MapExamples) {
  EXPECT_EQ(relu(-1.0), 0.0);
  EXPECT_EQ(relu(2.5), 2.5);
  Matrix x(2, 2);
  x << -3, 0.5, 0, 7;
  Matrix expected(2, 2);
  expected << 0, 0.5, 0, 7;
  EXPECT_EQ(Matrix(relu_map(x)), expected);
}

TEST(RepresentationInstanceTest, SmallInstanceShape) {
  const auto inst = generate_representation_instance({4, 6, 2, 1.0}, BiasModel(Gaussian{0.0, 0.1}), 1);
  EXPECT_EQ(inst.d(), 4);
  EXPECT_EQ(inst.n(), 6);
  EXPECT_EQ(inst.k(), 2);
  EXPECT_EQ(inst.M.cwiseAbs().maxCoeff(), 1.0);
  Eigen::JacobiSVD<Matrix> svd(inst.M);
  EXPECT_GT(svd.singularValues()(1), 1e-8);
  EXPECT_LT(svd.singularValues()(2), 1e-12);
}

TEST(RepresentationInstanceTest, Deterministic) {
  const auto a = generate_representation_instance({20, 40, 3, 1.0}, kExpDefault, 9);
  const auto b = generate_representation_instance({20, 40, 3, 1.0}, kExpDefault, 9);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.C, b.C);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.Y, b.Y);
  const auto c = generate_representation_instance({20, 40, 3, 1.0}, kExpDefault, 10);
  EXPECT_NE(a.Y, c.Y);
}

TEST(RepresentationInstanceTest, PositiveFractionIsNonTrivial) {
  for (std::uint64_t seed = 3; seed < 23; ++seed) {
    const auto inst = generate_representation_instance({50, 100, 5, 1.0}, kExpDefault, seed);
    const double frac = (inst.Y.array() > 0.0).cast<double>().mean();
    EXPECT_GE(frac, 0.01);
    EXPECT_LE(frac, 0.99);
  }
}

TEST(RepresentationInstanceTest, StructuralInvariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = generate_representation_instance({30, 60, 4, 1.5}, kExpDefault, seed);
    EXPECT_LE(inst.M.cwiseAbs().maxCoeff(), 1.5);
    const Matrix recomputed = relu_map((inst.M.colwise() + inst.b).eval());
    EXPECT_EQ(recomputed, inst.Y);
    for (Eigen::Index i = 0; i < inst.d(); ++i) {
      for (Eigen::Index j = 0; j < inst.n(); ++j) {
        const bool positive = inst.Y(i, j) > 0.0;
        EXPECT_EQ(positive, inst.M(i, j) + inst.b(i) > 0.0);
        if (positive) {
          // Y - M recovers b up to one rounding of the sum.
          EXPECT_NEAR(inst.Y(i, j) - inst.M(i, j), inst.b(i), 1e-14);
        }
      }
    }
    // Recorded margins agree with a direct recomputation.
    ExtendedReal nu = ExtendedReal::positive_infinity();
    for (Eigen::Index i = 0; i < inst.d(); ++i) {
      double min_on = INFINITY, max_off = -INFINITY;
      for (Eigen::Index j = 0; j < inst.n(); ++j) {
        if (inst.Y(i, j) > 0.0) min_on = std::min(min_on, inst.M(i, j));
        else max_off = std::max(max_off, inst.M(i, j));
      }
      if (std::isfinite(min_on) && std::isfinite(max_off)) {
        EXPECT_EQ(inst.row_margins[i].value(), min_on - max_off);
        nu = std::min(nu, ExtendedReal(min_on - max_off),
                      [](const ExtendedReal& a, const ExtendedReal& b) { return a < b; });
      } else {
        EXPECT_TRUE(inst.row_margins[i].is_positive_infinity());
      }
    }
    EXPECT_EQ(nu.value(), inst.realized_nu);
  }
}

TEST(RepresentationInstanceTest, ScalingGammaScalesM) {
  const auto a = generate_representation_instance({15, 30, 3, 1.0}, kExpDefault, 4);
  const auto b = generate_representation_instance({15, 30, 3, 2.0}, kExpDefault, 4);
  EXPECT_EQ(b.M, Matrix(2.0 * a.M));
}

TEST(RepresentationInstanceTest, TargetNuRejection) {
  GenerationOptions opts;
  opts.target_nu = 1e-3;
  const auto inst = generate_representation_instance({6, 12, 2, 1.0}, BiasModel(Gaussian{0.0, 0.1}), 2, opts);
  EXPECT_GE(inst.realized_nu, 1e-3);
  opts.target_nu = 1.9;
  opts.max_retries = 3;
  EXPECT_THROW(generate_representation_instance({40, 80, 3, 1.0}, kExpDefault, 2, opts),
               DegenerateInstanceError);
}

TEST(RepresentationInstanceTest, RejectsBadParameters) {
  EXPECT_THROW(generate_representation_instance({0, 5, 1, 1.0}, kExpDefault, 1),
               InvalidArgumentError);
  EXPECT_THROW(generate_representation_instance({5, 5, 6, 1.0}, kExpDefault, 1),
               InvalidArgumentError);
  EXPECT_THROW(generate_representation_instance({5, 5, 2, -1.0}, kExpDefault, 1),
               InvalidArgumentError);
}

TEST(RecoveryInstanceTest, NoiseFreeCase) {
  const auto inst = generate_recovery_instance({10, 2, 0, 0.0, 5.0}, ConstantBias{0.0}, 1);
  EXPECT_EQ(inst.v, Vector(relu_map(inst.A * inst.c_star)));
  EXPECT_TRUE(inst.e_star.isZero());
  EXPECT_TRUE(inst.w.isZero());
  EXPECT_NEAR(inst.c_star.norm(), 1.0, 1e-12);
}

TEST(RecoveryInstanceTest, OutliersAndNoise) {
  const auto inst = generate_recovery_instance({100, 5, 10, 0.01, 5.0}, ConstantBias{0.0}, 2);
  EXPECT_EQ((inst.e_star.array() != 0.0).count(), 10);
  EXPECT_LE(inst.w.lpNorm<Eigen::Infinity>(), 0.01);
  EXPECT_EQ(inst.support.size(), 10u);
  for (auto i : inst.support) EXPECT_EQ(std::abs(inst.e_star(i)), 5.0);
  const Vector rebuilt = relu_map((inst.A * inst.c_star + inst.b).eval()) + inst.e_star + inst.w;
  EXPECT_EQ(rebuilt, inst.v);
}

TEST(RecoveryInstanceTest, HalfNormalMean) {
  const auto inst = generate_recovery_instance({10000, 1, 0, 0.0, 5.0}, ConstantBias{0.0}, 5);
  const double expected = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  // sd of relu(g) is sqrt(1/2 - 1/(2 pi)).
  const double se = std::sqrt(0.5 - 0.5 / std::numbers::pi) / 100.0;
  EXPECT_NEAR(inst.v.mean(), expected, 3.0 * se);
}

TEST(RecoveryInstanceTest, OutlierStreamsAreSeparateFromWeights) {
  // Changing s must not move A or c*: they come from their own streams.
  const auto a = generate_recovery_instance({200, 4, 5, 0.0, 5.0}, ConstantBias{0.0}, 8);
  const auto b = generate_recovery_instance({200, 4, 40, 0.0, 5.0}, ConstantBias{0.0}, 8);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.c_star, b.c_star);
}

TEST(RecoveryInstanceTest, RandomBiasIsSampledPerCoordinate) {
  const BiasSpec spec = BiasModel(Gaussian{0.0, 1.0});
  const auto inst = generate_recovery_instance({500, 3, 0, 0.0, 5.0}, spec, 3);
  std::set<double> distinct(inst.b.data(), inst.b.data() + inst.b.size());
  EXPECT_EQ(distinct.size(), 500u);
}

TEST(BiasSpecTest, ParseConstant) {
  const auto spec = parse_bias_spec("const:b0=0.5");
  EXPECT_EQ(std::get<ConstantBias>(spec).value, 0.5);
  EXPECT_EQ(to_config_string(parse_bias_spec(to_config_string(spec))),
            to_config_string(spec));
  EXPECT_TRUE(std::holds_alternative<BiasModel>(parse_bias_spec("gauss:mean=0,std=1")));
  EXPECT_THROW(parse_bias_spec("const:b=1"), InvalidArgumentError);
  EXPECT_THROW(parse_bias_spec("const:b0=x"), InvalidArgumentError);
}

}  // namespace
}  // namespace relurep
