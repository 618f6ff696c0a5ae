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

// Serial reference path against the OpenMP path for the kernels that take an
// Execution argument. Arg 0 is serial, 1 is parallel.

#include <benchmark/benchmark.h>

#include "relurep/bias_models.hpp"
#include "relurep/nonlinearity.hpp"
#include "relurep/random.hpp"
#include "relurep/relu_generative.hpp"
#include "relurep/representation_learning.hpp"

namespace {

using namespace relurep;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void BM_ReconstructMatrix(benchmark::State& state) {
  const BiasModel model = BiasModel::default_for_gamma(1.0);
  const auto d = static_cast<Eigen::Index>(state.range(1));
  const auto inst = generate_representation_instance({d, 2 * d, 5, 1.0}, model, 3);
  for (auto _ : state) {
    auto est = reconstruct_matrix(inst.Y, model, 1.0, inst.realized_nu,
                                  FillStrategy::kMidpoint, exec_of(state));
    benchmark::DoNotOptimize(est.M_hat.data());
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_ReconstructMatrix)
    ->ArgsProduct({{0, 1}, {200, 800}})
    ->Unit(benchmark::kMillisecond);

void BM_BiasConstants(benchmark::State& state) {
  const BiasModel model(Logistic{-0.3, 0.7});
  for (auto _ : state) {
    const double b = flatness_beta(model, 1.0, exec_of(state)).beta;
    const double l = lipschitz_L(model, 1.0, exec_of(state));
    const double w = omega_min_mass(model, 1.0, 0.01, exec_of(state));
    benchmark::DoNotOptimize(b + l + w);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_BiasConstants)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarloStats(benchmark::State& state) {
  const BiasSpec bias = BiasModel(Gaussian{0.2, 0.7});
  for (auto _ : state) {
    auto s = compute_nonlinearity_stats(bias, MonteCarlo{1000000, 5}, exec_of(state));
    benchmark::DoNotOptimize(s.eta);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_MonteCarloStats)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
