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

#include "relurep/nonlinearity.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "relurep/errors.hpp"

namespace relurep {
namespace {

using boost::math::quadrature::gauss_kronrod;

// Beyond |g| = 12 the Gaussian weight is below 1e-31.
constexpr double kGaussTail = 12.0;
constexpr double kQuadTol = 1e-13;
constexpr unsigned kMaxDepth = 20;
constexpr std::uint64_t kChunk = 1 << 16;

double phi(double g) {
  return std::exp(-0.5 * g * g) / std::sqrt(2.0 * std::numbers::pi);
}

template <class F>
double integrate(F f, double a, double b) {
  if (!(a < b)) return 0.0;
  return gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, kQuadTol);
}

// Integral of h(g) phi(g) over the whole line for an integrand that vanishes
// for g < -b0 (or is smooth on both sides of the kink).
template <class F>
double gauss_expectation(F h, double b0) {
  const double kink = std::clamp(-b0, -kGaussTail, kGaussTail);
  auto weighted = [&](double g) { return h(g) * phi(g); };
  return integrate(weighted, -kGaussTail, kink) +
         integrate(weighted, kink, kGaussTail);
}

// E_b[ inner(b) ] for the bias law; inner(b) is itself an expectation in g.
template <class F>
double bias_expectation(const BiasSpec& bias, F inner) {
  if (const auto* c = std::get_if<ConstantBias>(&bias)) return inner(c->value);
  const auto& model = std::get<BiasModel>(bias);
  auto [lo, hi] = model.effective_support();
  auto weighted = [&](double b) { return model.density(b) * inner(b); };
  // Splitting at the mode keeps the outer integrand smooth on each piece
  // except at the exponential's jump, which sits on an endpoint anyway.
  const double mid = std::clamp(model.mode(), lo, hi);
  return integrate(weighted, lo, mid) + integrate(weighted, mid, hi);
}

// Per-sample quantities accumulated by the Monte Carlo path.
struct Moments {
  std::array<double, 2> sum{};
  std::array<double, 2> sum_sq{};
};

double draw_bias(const BiasSpec& bias, std::mt19937_64& rng) {
  if (const auto* c = std::get_if<ConstantBias>(&bias)) return c->value;
  return std::get<BiasModel>(bias).sample(rng);
}

// Runs `per_sample(g, b) -> array<double, 2>` over `samples` draws split into
// fixed chunks with their own streams, then sums the chunks in order, so the
// serial and parallel paths produce identical bits.
template <class F>
Moments monte_carlo(const BiasSpec& bias, const MonteCarlo& mc, F per_sample,
                    Execution exec) {
  if (mc.samples < 2) {
    throw InvalidArgumentError("Monte Carlo needs at least 2 samples");
  }
  const std::uint64_t chunks = (mc.samples + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  auto run_chunk = [&](std::uint64_t c) {
    auto rng = make_stream(mc.seed, Stream::kMonteCarlo, c);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(mc.samples, begin + kChunk);
    Moments m;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double g = normal(rng);
      const double b = draw_bias(bias, rng);
      const auto x = per_sample(g, b);
      for (int j = 0; j < 2; ++j) {
        m.sum[j] += x[j];
        m.sum_sq[j] += x[j] * x[j];
      }
    }
    partial[c] = m;
  };
  const auto n_chunks = static_cast<std::int64_t>(chunks);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  }
  Moments total;
  for (const auto& m : partial) {
    for (int j = 0; j < 2; ++j) {
      total.sum[j] += m.sum[j];
      total.sum_sq[j] += m.sum_sq[j];
    }
  }
  return total;
}

Estimate mean_and_error(const Moments& m, int j, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double mean = m.sum[j] / nn;
  const double var =
      std::max(0.0, (m.sum_sq[j] - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn)};
}

// sqrt of an estimated second moment; the error goes through the delta
// method d sqrt(x) = dx / (2 sqrt(x)).
Estimate root(const Estimate& squared) {
  const double v = std::sqrt(std::max(0.0, squared.value));
  const double se = v > 0.0 ? squared.std_error / (2.0 * v) : squared.std_error;
  return {v, se};
}

}  // namespace

std::string to_string(const StatsMethod& method) {
  if (std::holds_alternative<Quadrature>(method)) return "quadrature";
  return "monte_carlo(" +
         std::to_string(std::get<MonteCarlo>(method).samples) + ")";
}

Estimate mu_parameter(const BiasSpec& bias, const StatsMethod& method,
                      Execution exec) {
  if (const auto* mc = std::get_if<MonteCarlo>(&method)) {
    const auto m = monte_carlo(
        bias, *mc,
        [](double g, double b) {
          return std::array<double, 2>{relu(g + b) * g, 0.0};
        },
        exec);
    return mean_and_error(m, 0, mc->samples);
  }
  const double mu = bias_expectation(bias, [](double b) {
    return gauss_expectation([b](double g) { return relu(g + b) * g; }, b);
  });
  return {mu, 0.0};
}

SigmaEta sigma_eta_parameters(const BiasSpec& bias, double mu,
                              const StatsMethod& method, Execution exec) {
  if (const auto* mc = std::get_if<MonteCarlo>(&method)) {
    const auto m = monte_carlo(
        bias, *mc,
        [mu](double g, double b) {
          const double r = relu(g + b) - mu * g;
          return std::array<double, 2>{r * r, g * g * r * r};
        },
        exec);
    return {root(mean_and_error(m, 0, mc->samples)),
            root(mean_and_error(m, 1, mc->samples))};
  }
  const double s2 = bias_expectation(bias, [mu](double b) {
    return gauss_expectation(
        [b, mu](double g) {
          const double r = relu(g + b) - mu * g;
          return r * r;
        },
        b);
  });
  const double e2 = bias_expectation(bias, [mu](double b) {
    return gauss_expectation(
        [b, mu](double g) {
          const double r = relu(g + b) - mu * g;
          return g * g * r * r;
        },
        b);
  });
  return {root({s2, 0.0}), root({e2, 0.0})};
}

NonlinearityStats compute_nonlinearity_stats(const BiasSpec& bias,
                                             const StatsMethod& method,
                                             Execution exec) {
  NonlinearityStats out;
  out.method = method;
  out.bias = bias;
  const Estimate mu = mu_parameter(bias, method, exec);
  const SigmaEta se = sigma_eta_parameters(bias, mu.value, method, exec);
  out.mu = mu.value;
  out.sigma = se.sigma.value;
  out.eta = se.eta.value;
  out.mu_std_error = mu.std_error;
  out.sigma_std_error = se.sigma.std_error;
  out.eta_std_error = se.eta.std_error;
  auto warn = [&](const char* name, double err) {
    if (err > kMonteCarloWarnThreshold) {
      out.warnings.push_back(std::string("Monte Carlo standard error of ") +
                             name + " is " + std::to_string(err));
    }
  };
  warn("mu", out.mu_std_error);
  warn("sigma", out.sigma_std_error);
  warn("eta", out.eta_std_error);
  return out;
}

}  // namespace relurep
