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
#include <limits>
#include <map>
#include <numbers>

#include "relurep/errors.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVacuousThreshold = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Evenly spaced points lo = x_0 < ... < x_m = hi with m = ceil((hi - lo) *
// per_unit). Both endpoints are hit exactly.
struct Grid {
  double lo;
  double hi;
  std::int64_t intervals;

  std::int64_t size() const { return intervals + 1; }
  double at(std::int64_t i) const {
    if (i == intervals) return hi;
    return lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(intervals);
  }
};

Grid make_grid(double lo, double hi, int per_unit) {
  const double span = hi - lo;
  const auto intervals = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(span * per_unit)));
  return Grid{lo, hi, span > 0.0 ? intervals : 0};
}

template <class F>
double grid_min(const Grid& grid, F&& f, Execution exec) {
  double best = kInf;
  const std::int64_t n = grid.size();
  if (exec == Execution::kParallel) {
#pragma omp parallel for reduction(min : best) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) best = std::min(best, f(grid.at(i)));
  } else {
    for (std::int64_t i = 0; i < n; ++i) best = std::min(best, f(grid.at(i)));
  }
  return best;
}

template <class F>
double grid_max(const Grid& grid, F&& f, Execution exec) {
  return -grid_min(grid, [&f](double x) { return -f(x); }, exec);
}

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double gaussian_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }
double logistic_cdf(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logistic_sf(double z) { return 1.0 / (1.0 + std::exp(z)); }

void validate(const BiasModel::Law& law) {
  std::visit(Overloaded{
                 [](const ShiftedExponential& e) {
                   if (!(e.rate > 0.0) || !std::isfinite(e.rate) ||
                       !std::isfinite(e.shift)) {
                     throw InvalidArgumentError(
                         "exponential bias needs rate > 0 and a finite shift");
                   }
                 },
                 [](const Gaussian& g) {
                   if (!(g.stddev > 0.0) || !std::isfinite(g.stddev) ||
                       !std::isfinite(g.mean)) {
                     throw InvalidArgumentError(
                         "gaussian bias needs std > 0 and a finite mean");
                   }
                 },
                 [](const Logistic& l) {
                   if (!(l.scale > 0.0) || !std::isfinite(l.scale) ||
                       !std::isfinite(l.location)) {
                     throw InvalidArgumentError(
                         "logistic bias needs scale > 0 and a finite location");
                   }
                 },
             },
             law);
}

}  // namespace

BiasModel::BiasModel(Law law, int grid_resolution)
    : law_(law), grid_resolution_(grid_resolution) {
  validate(law_);
  if (grid_resolution_ < 1) {
    throw InvalidArgumentError("grid_resolution must be a positive integer");
  }
}

BiasModel BiasModel::default_for_gamma(double gamma) {
  return BiasModel(ShiftedExponential{1.0, -gamma - 1.0});
}

BiasModel BiasModel::with_grid_resolution(int grid_resolution) const {
  return BiasModel(law_, grid_resolution);
}

BiasModel BiasModel::parse(std::string_view config) {
  const std::string_view trimmed = text::trim(config);
  const auto colon = trimmed.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgumentError("bias config '" + std::string(config) +
                               "' is missing '<kind>:'");
  }
  const std::string kind(text::trim(trimmed.substr(0, colon)));
  const std::string_view body = trimmed.substr(colon + 1);

  std::map<std::string, double, std::less<>> values;
  if (!text::trim(body).empty()) {
    for (std::string_view item : text::split(body, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw InvalidArgumentError("bias config item '" + std::string(item) +
                                   "' is not key=value");
      }
      const std::string key(text::trim(item.substr(0, eq)));
      const auto value = text::parse_double(item.substr(eq + 1));
      if (!value || !std::isfinite(*value)) {
        throw InvalidArgumentError("bias config key '" + key +
                                   "' has a malformed value");
      }
      if (!values.emplace(key, *value).second) {
        throw InvalidArgumentError("bias config key '" + key + "' repeated");
      }
    }
  }

  const auto take = [&](std::initializer_list<std::string_view> allowed,
                        std::string_view key, double fallback) {
    for (const auto& [k, v] : values) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        throw InvalidArgumentError("unknown key '" + k + "' for bias kind '" +
                                   kind + "'");
      }
    }
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  };

  if (kind == "exp") {
    return BiasModel(ShiftedExponential{take({"rate", "shift"}, "rate", 1.0),
                                        take({"rate", "shift"}, "shift", 0.0)});
  }
  if (kind == "gauss") {
    return BiasModel(Gaussian{take({"mean", "std"}, "mean", 0.0),
                              take({"mean", "std"}, "std", 1.0)});
  }
  if (kind == "logistic") {
    return BiasModel(Logistic{take({"loc", "scale"}, "loc", 0.0),
                              take({"loc", "scale"}, "scale", 1.0)});
  }
  throw InvalidArgumentError("unknown bias kind '" + kind +
                             "' (expected exp, gauss or logistic)");
}

std::string BiasModel::to_config_string() const {
  using text::format_double;
  return std::visit(
      Overloaded{
          [](const ShiftedExponential& e) {
            return "exp:rate=" + format_double(e.rate) +
                   ",shift=" + format_double(e.shift);
          },
          [](const Gaussian& g) {
            return "gauss:mean=" + format_double(g.mean) +
                   ",std=" + format_double(g.stddev);
          },
          [](const Logistic& l) {
            return "logistic:loc=" + format_double(l.location) +
                   ",scale=" + format_double(l.scale);
          },
      },
      law_);
}

double BiasModel::density(double x) const {
  return std::visit(
      Overloaded{
          [x](const ShiftedExponential& e) {
            if (x < e.shift) return 0.0;
            return e.rate * std::exp(-e.rate * (x - e.shift));
          },
          [x](const Gaussian& g) {
            const double z = (x - g.mean) / g.stddev;
            return std::exp(-0.5 * z * z) /
                   (g.stddev * std::sqrt(2.0 * std::numbers::pi));
          },
          [x](const Logistic& l) {
            const double e = std::exp(-std::abs((x - l.location) / l.scale));
            return e / (l.scale * (1.0 + e) * (1.0 + e));
          },
      },
      law_);
}

double BiasModel::density_derivative(double x) const {
  const double p = density(x);
  return std::visit(
      Overloaded{
          [p](const ShiftedExponential& e) { return -e.rate * p; },
          [x, p](const Gaussian& g) {
            return -(x - g.mean) / (g.stddev * g.stddev) * p;
          },
          [x, p](const Logistic& l) {
            return -p / l.scale * std::tanh(0.5 * (x - l.location) / l.scale);
          },
      },
      law_);
}

double BiasModel::cdf(const ExtendedReal& x) const {
  if (x.is_negative_infinity()) return 0.0;
  if (x.is_positive_infinity()) return 1.0;
  const double v = x.value();
  return std::visit(
      Overloaded{
          [v](const ShiftedExponential& e) {
            if (v <= e.shift) return 0.0;
            return -std::expm1(-e.rate * (v - e.shift));
          },
          [v](const Gaussian& g) {
            return gaussian_cdf((v - g.mean) / g.stddev);
          },
          [v](const Logistic& l) {
            return logistic_cdf((v - l.location) / l.scale);
          },
      },
      law_);
}

double BiasModel::survival(const ExtendedReal& x) const {
  if (x.is_negative_infinity()) return 1.0;
  if (x.is_positive_infinity()) return 0.0;
  const double v = x.value();
  return std::visit(
      Overloaded{
          [v](const ShiftedExponential& e) {
            if (v <= e.shift) return 1.0;
            return std::exp(-e.rate * (v - e.shift));
          },
          [v](const Gaussian& g) {
            return gaussian_sf((v - g.mean) / g.stddev);
          },
          [v](const Logistic& l) {
            return logistic_sf((v - l.location) / l.scale);
          },
      },
      law_);
}

double BiasModel::mass_between(const ExtendedReal& lo,
                               const ExtendedReal& hi) const {
  if (hi < lo) {
    throw InvalidIntervalError("mass_between: lo " + lo.to_string() +
                               " exceeds hi " + hi.to_string());
  }
  if (lo == hi) return 0.0;
  if (lo.is_negative_infinity()) return cdf(hi);
  if (hi.is_positive_infinity()) return survival(lo);

  const double a = lo.value();
  const double b = hi.value();
  if (const auto* e = std::get_if<ShiftedExponential>(&law_)) {
    if (b <= e->shift) return 0.0;
    const double from = std::max(a, e->shift);
    return std::exp(-e->rate * (from - e->shift)) *
           -std::expm1(-e->rate * (b - from));
  }
  const double median = std::holds_alternative<Gaussian>(law_)
                            ? std::get<Gaussian>(law_).mean
                            : std::get<Logistic>(law_).location;
  const double mass = a >= median ? survival(lo) - survival(hi)
                                  : cdf(hi) - cdf(lo);
  return std::max(0.0, mass);
}

std::pair<double, double> BiasModel::effective_support() const {
  return std::visit(
      Overloaded{
          [](const ShiftedExponential& e) {
            return std::pair{e.shift, e.shift + 40.0 / e.rate};
          },
          [](const Gaussian& g) {
            return std::pair{g.mean - 9.0 * g.stddev, g.mean + 9.0 * g.stddev};
          },
          [](const Logistic& l) {
            return std::pair{l.location - 40.0 * l.scale,
                             l.location + 40.0 * l.scale};
          },
      },
      law_);
}

std::optional<double> BiasModel::support_lower_bound() const {
  if (const auto* e = std::get_if<ShiftedExponential>(&law_)) return e->shift;
  return std::nullopt;
}

double BiasModel::mode() const {
  return std::visit(
      Overloaded{
          [](const ShiftedExponential& e) { return e.shift; },
          [](const Gaussian& g) { return g.mean; },
          [](const Logistic& l) { return l.location; },
      },
      law_);
}

bool BiasModel::has_interior_mode() const {
  return !std::holds_alternative<ShiftedExponential>(law_);
}

double BiasModel::sample(std::mt19937_64& rng) const {
  return std::visit(
      Overloaded{
          [&rng](const ShiftedExponential& e) {
            return e.shift + std::exponential_distribution<double>(e.rate)(rng);
          },
          [&rng](const Gaussian& g) {
            return std::normal_distribution<double>(g.mean, g.stddev)(rng);
          },
          [&rng](const Logistic& l) {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double u = 0.0;
            do {
              u = unif(rng);
            } while (u <= 0.0 || u >= 1.0);
            return l.location + l.scale * std::log(u / (1.0 - u));
          },
      },
      law_);
}

DensityValue density_and_derivative(const BiasModel& model, double x) {
  return {model.density(x), model.density_derivative(x)};
}

double interval_probability(const BiasModel& model, const ExtendedReal& x1,
                            const ExtendedReal& x2) {
  if (x1 < x2) {
    throw InvalidIntervalError("interval_probability needs x1 >= x2, got x1=" +
                               x1.to_string() + ", x2=" + x2.to_string());
  }
  return model.mass_between(-x1, -x2);
}

std::vector<double> sample_bias(const BiasModel& model, std::size_t d,
                                std::uint64_t seed) {
  if (d == 0) throw InvalidArgumentError("sample_bias needs d >= 1");
  auto rng = make_stream(seed, Stream::kBias);
  std::vector<double> out(d);
  for (auto& b : out) b = model.sample(rng);
  return out;
}

FlatnessResult flatness_beta(const BiasModel& model, double gamma,
                             Execution exec) {
  if (!(gamma > 0.0)) throw InvalidArgumentError("gamma must be positive");
  const Grid grid = make_grid(-gamma, gamma, model.grid_resolution());
  const double inf = grid_min(
      grid,
      [&model](double x) {
        const auto [p, dp] = density_and_derivative(model, x);
        if (p <= 0.0) return kInf;
        return dp * dp / (4.0 * p);
      },
      exec);
  if (inf == kInf) {
    throw InvalidArgumentError(
        "flatness_beta: density vanishes on all of [-gamma, gamma]");
  }
  if (inf < kVacuousThreshold) return {0.0, true};
  return {inf, false};
}

double lipschitz_L(const BiasModel& model, double gamma, Execution exec) {
  if (!(gamma > 0.0)) throw InvalidArgumentError("gamma must be positive");
  if (model.cdf(-gamma) == 0.0) {
    throw InvalidArgumentError(
        "lipschitz_L: P(B <= -gamma) is zero, p/CDF is undefined");
  }
  const Grid grid = make_grid(-gamma, gamma, model.grid_resolution());
  return grid_max(
      grid,
      [&model](double x) {
        const auto [p, dp] = density_and_derivative(model, x);
        if (p <= 0.0) return 0.0;
        return std::max(p / model.cdf(x), std::abs(dp) / p);
      },
      exec);
}

double omega_min_mass(const BiasModel& model, double gamma, double nu,
                      Execution exec) {
  if (!(gamma > 0.0)) throw InvalidArgumentError("gamma must be positive");
  if (!(nu > 0.0)) throw InvalidArgumentError("nu must be positive");
  if (nu > 2.0 * gamma) {
    throw InvalidIntervalError("omega_min_mass: nu exceeds 2 gamma");
  }
  const Grid grid = make_grid(-gamma, gamma - nu, model.grid_resolution());
  return grid_min(
      grid,
      [&model, nu](double t) { return model.mass_between(-t - nu, -t); },
      exec);
}

BiasConstants compute_bias_constants(const BiasModel& model, double gamma,
                                     double nu) {
  const FlatnessResult flat = flatness_beta(model, gamma);
  BiasConstants c;
  c.beta = flat.beta;
  c.beta_vacuous = flat.vacuous;
  c.lipschitz = lipschitz_L(model, gamma);
  c.omega = omega_min_mass(model, gamma, nu);
  c.gamma = gamma;
  c.nu = nu;
  return c;
}

}  // namespace relurep
