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
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "relurep/extended_real.hpp"
#include "relurep/random.hpp"

namespace relurep {

// p(x) = rate * exp(-rate (x - shift)) for x >= shift, zero to the left.
struct ShiftedExponential {
  double rate = 1.0;
  double shift = 0.0;
};

struct Gaussian {
  double mean = 0.0;
  double stddev = 1.0;
};

struct Logistic {
  double location = 0.0;
  double scale = 1.0;
};

// A one-dimensional bias law. Immutable after construction; all member
// functions are pure and safe to call concurrently.
class BiasModel {
 public:
  using Law = std::variant<ShiftedExponential, Gaussian, Logistic>;

  static constexpr int kDefaultGridResolution = 10000;

  explicit BiasModel(Law law, int grid_resolution = kDefaultGridResolution);

  // Parses "exp:rate=1,shift=-2", "gauss:mean=0,std=1" or
  // "logistic:loc=0,scale=1". Keys may be omitted (defaults as in the
  // structs above) but not repeated or misspelled.
  static BiasModel parse(std::string_view config);

  // shifted_exponential(rate 1, shift -gamma - 1). Strictly decreasing on
  // [-gamma, gamma], so the flatness constant is positive there.
  static BiasModel default_for_gamma(double gamma);

  std::string to_config_string() const;

  const Law& law() const { return law_; }
  int grid_resolution() const { return grid_resolution_; }
  BiasModel with_grid_resolution(int grid_resolution) const;

  double density(double x) const;
  // For the exponential: -rate * p(x) for x >= shift (one-sided at the
  // shift), 0 to the left.
  double density_derivative(double x) const;
  double cdf(const ExtendedReal& x) const;
  double survival(const ExtendedReal& x) const;
  // P(lo <= B <= hi), evaluated without cancellation in either tail.
  double mass_between(const ExtendedReal& lo, const ExtendedReal& hi) const;

  // Interval outside of which the density is negligible (< 1e-15 mass).
  std::pair<double, double> effective_support() const;
  // Left end of the support when it is finite (the exponential's shift).
  std::optional<double> support_lower_bound() const;
  // argmax of the density (the exponential's shift, else the center).
  double mode() const;

  double sample(std::mt19937_64& rng) const;

  // True for laws whose density has an interior stationary point, which
  // makes the flatness constant zero on any interval containing it.
  bool has_interior_mode() const;

 private:
  Law law_;
  int grid_resolution_;
};

struct DensityValue {
  double p = 0.0;
  double dp = 0.0;
};

DensityValue density_and_derivative(const BiasModel& model, double x);

// F(x1, x2) = P(-x1 <= B <= -x2). Requires x1 >= x2.
double interval_probability(const BiasModel& model, const ExtendedReal& x1,
                            const ExtendedReal& x2);

std::vector<double> sample_bias(const BiasModel& model, std::size_t d,
                                std::uint64_t seed);

struct FlatnessResult {
  double beta = 0.0;
  // Set when the grid infimum fell below 1e-12 and beta was clamped to 0.
  bool vacuous = false;
};

// inf over |x| <= gamma of p'(x)^2 / (4 p(x)), by grid search.
FlatnessResult flatness_beta(const BiasModel& model, double gamma,
                             Execution exec = Execution::kParallel);

// max over |x| <= gamma of max{p(x) / P(B <= x), |p'(x)| / p(x)}.
double lipschitz_L(const BiasModel& model, double gamma,
                   Execution exec = Execution::kParallel);

// Smallest mass P(-t - nu <= B <= -t) over t in [-gamma, gamma - nu]: the
// least probability of any window of length >= nu inside [-gamma, gamma].
double omega_min_mass(const BiasModel& model, double gamma, double nu,
                      Execution exec = Execution::kParallel);

struct BiasConstants {
  double beta = 0.0;
  double lipschitz = 0.0;
  double omega = 0.0;
  double gamma = 0.0;
  double nu = 0.0;
  bool beta_vacuous = false;
};

BiasConstants compute_bias_constants(const BiasModel& model, double gamma,
                                     double nu);

}  // namespace relurep
