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

#include "relurep/bias_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "relurep/errors.hpp"

namespace relurep {
namespace {

const ExtendedReal kInf = ExtendedReal::positive_infinity();
const ExtendedReal kNegInf = ExtendedReal::negative_infinity();

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

BiasModel exp_model(double rate, double shift) {
  return BiasModel(ShiftedExponential{rate, shift});
}
BiasModel gauss_model(double mean = 0.0, double sd = 1.0) {
  return BiasModel(Gaussian{mean, sd});
}
BiasModel logistic_model(double loc = 0.0, double scale = 1.0) {
  return BiasModel(Logistic{loc, scale});
}

// Brute-force grid oracles, written independently of the library's grid.
double oracle_beta(const BiasModel& m, double gamma, int points) {
  double best = INFINITY;
  for (int i = 0; i <= points; ++i) {
    const double x = -gamma + 2.0 * gamma * i / points;
    const double p = m.density(x);
    if (p <= 0.0) continue;
    const double dp = m.density_derivative(x);
    best = std::min(best, dp * dp / (4.0 * p));
  }
  return best;
}

double oracle_lipschitz(const BiasModel& m, double gamma, int points) {
  double best = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double x = -gamma + 2.0 * gamma * i / points;
    const double p = m.density(x);
    best = std::max(best, p / m.cdf(x));
    if (p > 0.0) best = std::max(best, std::abs(m.density_derivative(x)) / p);
  }
  return best;
}

TEST(BiasModelTest, DensityAndDerivativeExamples) {
  auto v = density_and_derivative(exp_model(1.0, -1.0), -1.0);
  EXPECT_DOUBLE_EQ(v.p, 1.0);
  EXPECT_DOUBLE_EQ(v.dp, -1.0);

  v = density_and_derivative(gauss_model(), 0.0);
  EXPECT_NEAR(v.p, 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_EQ(v.dp, 0.0);

  v = density_and_derivative(exp_model(2.0, 0.0), 1.0);
  EXPECT_NEAR(v.p, 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(v.dp, -4.0 * std::exp(-2.0), 1e-15);
  const auto m = exp_model(2.0, 0.0);
  const double fd = (m.density(1.0 + 1e-6) - m.density(1.0 - 1e-6)) / 2e-6;
  EXPECT_NEAR(v.dp, fd, 1e-6);
}

TEST(BiasModelTest, DensityIsZeroLeftOfExponentialShift) {
  const auto m = exp_model(1.0, -1.0);
  EXPECT_EQ(m.density(-1.5), 0.0);
  EXPECT_EQ(m.density_derivative(-1.5), 0.0);
  EXPECT_EQ(m.cdf(-1.5), 0.0);
}

TEST(BiasModelTest, DerivativeMatchesFiniteDifferences) {
  const double h = 1e-5;
  for (const auto& m : {exp_model(1.5, -2.0), gauss_model(0.3, 0.7),
                        logistic_model(-0.2, 0.8)}) {
    for (double x = -1.9; x <= 2.0; x += 0.173) {
      const double fd = (m.density(x + h) - m.density(x - h)) / (2 * h);
      EXPECT_NEAR(m.density_derivative(x), fd, 1e-4)
          << m.to_config_string() << " at " << x;
    }
  }
}

TEST(BiasModelTest, DensityIntegratesToOneAndCdfIsMonotone) {
  for (const auto& m : {exp_model(1.0, -2.0), exp_model(3.0, 0.5),
                        gauss_model(1.0, 2.0), logistic_model(0.0, 0.5)}) {
    const auto [lo, hi] = m.effective_support();
    // Composite Simpson on the effective support.
    const int n = 200000;
    const double h = (hi - lo) / n;
    double sum = m.density(lo) + m.density(hi);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * m.density(lo + i * h);
    EXPECT_NEAR(sum * h / 3.0, 1.0, 1e-6) << m.to_config_string();

    EXPECT_NEAR(m.cdf(lo - 1.0), 0.0, 1e-9);
    EXPECT_NEAR(m.cdf(hi + 1.0), 1.0, 1e-9);
    double prev = 0.0;
    for (double x = lo; x <= hi; x += (hi - lo) / 997) {
      const double c = m.cdf(x);
      EXPECT_GE(c, prev);
      prev = c;
    }
    EXPECT_EQ(m.cdf(kNegInf), 0.0);
    EXPECT_EQ(m.cdf(kInf), 1.0);
  }
}

TEST(BiasModelTest, IntervalProbabilityExamples) {
  const auto m = exp_model(1.0, -1.0);
  EXPECT_EQ(interval_probability(m, 0.3, 0.3), 0.0);
  EXPECT_EQ(interval_probability(m, kInf, kNegInf), 1.0);
  EXPECT_NEAR(interval_probability(m, kInf, 0.0), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_THROW(interval_probability(m, 0.0, 1.0), InvalidIntervalError);
  const auto g = gauss_model();
  EXPECT_NEAR(interval_probability(g, 1.0, -1.0),
              std_normal_cdf(1.0) - std_normal_cdf(-1.0), 1e-14);
}

TEST(BiasModelTest, IntervalProbabilityIsAdditive) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const auto& m : {exp_model(1.0, -1.0), gauss_model(), logistic_model()}) {
    for (int t = 0; t < 200; ++t) {
      double x[3] = {u(rng), u(rng), u(rng)};
      std::sort(x, x + 3, std::greater<>());
      const double whole = interval_probability(m, x[0], x[2]);
      const double parts = interval_probability(m, x[0], x[1]) +
                           interval_probability(m, x[1], x[2]);
      EXPECT_NEAR(whole, parts, 1e-9);
    }
  }
}

TEST(BiasModelTest, TailMassIsAccurate) {
  // Far right tail of the Gaussian: a naive 1 - cdf difference would be 0.
  const auto g = gauss_model();
  const double tail = g.mass_between(9.0, 10.0);
  const double expected = 0.5 * (std::erfc(9.0 / std::sqrt(2.0)) -
                                 std::erfc(10.0 / std::sqrt(2.0)));
  EXPECT_NEAR(tail / expected, 1.0, 1e-10);
}

TEST(BiasModelTest, SampleBiasExamples) {
  const auto g = sample_bias(gauss_model(), 100000, 7);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
  EXPECT_LT(std::abs(mean), 3.0 / std::sqrt(1e5));

  const auto e = sample_bias(exp_model(1.0, 0.0), 100000, 7);
  EXPECT_GE(*std::min_element(e.begin(), e.end()), 0.0);
  const double emean = std::accumulate(e.begin(), e.end(), 0.0) / e.size();
  EXPECT_NEAR(emean, 1.0, 3.0 / std::sqrt(1e5) * 1.0 + 1e-3);

  EXPECT_EQ(sample_bias(logistic_model(), 50, 3), sample_bias(logistic_model(), 50, 3));
  EXPECT_NE(sample_bias(logistic_model(), 50, 3), sample_bias(logistic_model(), 50, 4));
}

TEST(BiasModelTest, FlatnessExamples) {
  const auto g = flatness_beta(gauss_model(), 1.0);
  EXPECT_EQ(g.beta, 0.0);
  EXPECT_TRUE(g.vacuous);

  const auto e1 = flatness_beta(exp_model(1.0, -2.0), 1.0);
  EXPECT_FALSE(e1.vacuous);
  EXPECT_NEAR(e1.beta, std::exp(-3.0) / 4.0, 1e-12);
  EXPECT_NEAR(e1.beta, oracle_beta(exp_model(1.0, -2.0), 1.0, 4000), 1e-12);

  const auto e2 = flatness_beta(exp_model(2.0, -2.0), 0.5);
  EXPECT_NEAR(e2.beta, 2.0 * std::exp(-5.0), 1e-12);
}

TEST(BiasModelTest, ExponentialFlatnessMatchesClosedForm) {
  for (double rate : {0.5, 1.0, 2.0, 3.0}) {
    for (double gamma : {0.25, 1.0, 2.0}) {
      const auto m = exp_model(rate, -gamma - 0.5);
      const double closed = rate * rate * m.density(gamma) / 4.0;
      EXPECT_NEAR(flatness_beta(m, gamma).beta / closed, 1.0, 0.01);
    }
  }
}

TEST(BiasModelTest, LipschitzExamples) {
  const auto m = exp_model(1.0, -2.0);
  const double L = lipschitz_L(m, 1.0);
  // |p'|/p = 1 everywhere on the support; p/F peaks at -gamma below that.
  const double hazard = std::exp(-1.0) / (1.0 - std::exp(-1.0));
  EXPECT_LT(hazard, 1.0);
  EXPECT_NEAR(L, 1.0, 1e-12);
  EXPECT_NEAR(L, oracle_lipschitz(m, 1.0, 4000), 1e-9);

  const double Lg = lipschitz_L(gauss_model(), 1.0);
  EXPECT_GE(Lg, 1.0);
  EXPECT_NEAR(Lg, oracle_lipschitz(gauss_model(), 1.0, 4000), 1e-6);

  EXPECT_THROW(lipschitz_L(exp_model(1.0, 0.0), 1.0), Error);
}

TEST(BiasModelTest, OmegaExamples) {
  const auto g = gauss_model();
  EXPECT_NEAR(omega_min_mass(g, 1.0, 2.0), g.mass_between(-1.0, 1.0), 1e-12);
  EXPECT_NEAR(omega_min_mass(g, 1.0, 0.5),
              std_normal_cdf(-0.5) - std_normal_cdf(-1.0), 1e-9);
  EXPECT_NEAR(omega_min_mass(g, 1.0, 0.5), 0.1499, 1e-4);

  // Decreasing density: the lightest window is the rightmost one, [0.5, 1].
  const auto e = exp_model(1.0, -3.0);
  EXPECT_NEAR(omega_min_mass(e, 1.0, 0.5), std::exp(-3.5) - std::exp(-4.0), 1e-12);

  EXPECT_THROW(omega_min_mass(g, 1.0, 2.5), InvalidIntervalError);
}

TEST(BiasModelTest, OmegaMonotoneOnLattice) {
  for (const auto& m : {gauss_model(), exp_model(1.0, -3.0), logistic_model(0.2, 0.5)}) {
    const double gammas[] = {0.6, 0.8, 1.0, 1.2, 1.4};
    const double nus[] = {0.1, 0.2, 0.3, 0.4, 0.5};
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double w = omega_min_mass(m, gammas[i], nus[j]);
        EXPECT_GE(w, 0.0);
        EXPECT_LE(w, 1.0);
        if (i + 1 < 5) EXPECT_GE(w + 1e-15, omega_min_mass(m, gammas[i + 1], nus[j]));
        if (j + 1 < 5) EXPECT_LE(w, omega_min_mass(m, gammas[i], nus[j + 1]) + 1e-15);
      }
    }
  }
}

TEST(BiasModelTest, ConstantsConvergeUnderGridDoubling) {
  for (const auto& base : {exp_model(1.0, -2.0), logistic_model(-3.0, 0.7),
                           gauss_model(-2.5, 1.0)}) {
    const auto coarse = base.with_grid_resolution(2000);
    const auto fine = base.with_grid_resolution(4000);
    const auto a = compute_bias_constants(coarse, 1.0, 0.3);
    const auto b = compute_bias_constants(fine, 1.0, 0.3);
    EXPECT_GT(a.beta, 0.0) << base.to_config_string();
    EXPECT_LT(std::abs(a.beta - b.beta) / b.beta, 0.01);
    EXPECT_LT(std::abs(a.lipschitz - b.lipschitz) / b.lipschitz, 0.01);
    EXPECT_LT(std::abs(a.omega - b.omega) / b.omega, 0.01);
  }
}

TEST(BiasModelTest, ParseAndPrint) {
  const auto m = BiasModel::parse("exp:rate=2,shift=-1.5");
  const auto& law = std::get<ShiftedExponential>(m.law());
  EXPECT_EQ(law.rate, 2.0);
  EXPECT_EQ(law.shift, -1.5);
  EXPECT_EQ(BiasModel::parse(m.to_config_string()).to_config_string(),
            m.to_config_string());
  EXPECT_NO_THROW(BiasModel::parse("gauss:mean=0,std=1"));
  EXPECT_NO_THROW(BiasModel::parse("logistic:loc=0,scale=1"));
  EXPECT_THROW(BiasModel::parse("gauss"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("cauchy:loc=0"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("exp:rate=1,rate=2"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("exp:lambda=1"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("exp:rate=abc"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("exp:rate=-1"), InvalidArgumentError);
  EXPECT_THROW(BiasModel::parse("gauss:std=0"), InvalidArgumentError);
}

TEST(BiasModelTest, DefaultIsStrictlyMonotoneOnTheBox) {
  const auto m = BiasModel::default_for_gamma(1.0);
  const auto& law = std::get<ShiftedExponential>(m.law());
  EXPECT_EQ(law.rate, 1.0);
  EXPECT_EQ(law.shift, -2.0);
  EXPECT_FALSE(m.has_interior_mode());
  EXPECT_TRUE(gauss_model().has_interior_mode());
  EXPECT_GT(flatness_beta(m, 1.0).beta, 0.0);
}

}  // namespace
}  // namespace relurep
