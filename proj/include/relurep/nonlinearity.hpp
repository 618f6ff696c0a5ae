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
#include <string>
#include <variant>
#include <vector>

#include "relurep/random.hpp"
#include "relurep/relu_generative.hpp"

namespace relurep {

// Adaptive Gauss-Kronrod in g (split at the ReLU kink), nested inside an
// adaptive rule over the bias density when b is random.
struct Quadrature {};

struct MonteCarlo {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
};

using StatsMethod = std::variant<Quadrature, MonteCarlo>;

std::string to_string(const StatsMethod& method);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for quadrature
};

// Monte Carlo estimates with a standard error above this get a warning.
inline constexpr double kMonteCarloWarnThreshold = 1e-3;

// E[relu(g + b) g], g ~ N(0, 1) independent of b.
Estimate mu_parameter(const BiasSpec& bias, const StatsMethod& method,
                      Execution exec = Execution::kParallel);

struct SigmaEta {
  Estimate sigma;  // sqrt E[(relu(g + b) - mu g)^2]
  Estimate eta;    // sqrt E[g^2 (relu(g + b) - mu g)^2]
};

SigmaEta sigma_eta_parameters(const BiasSpec& bias, double mu,
                              const StatsMethod& method,
                              Execution exec = Execution::kParallel);

struct NonlinearityStats {
  double mu = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  double mu_std_error = 0.0;
  double sigma_std_error = 0.0;
  double eta_std_error = 0.0;
  StatsMethod method = Quadrature{};
  BiasSpec bias = ConstantBias{};
  std::vector<std::string> warnings;
};

NonlinearityStats compute_nonlinearity_stats(
    const BiasSpec& bias, const StatsMethod& method = Quadrature{},
    Execution exec = Execution::kParallel);

}  // namespace relurep
