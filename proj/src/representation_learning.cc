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

#include "relurep/representation_learning.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>

#include "relurep/errors.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

constexpr int kCoarseGridPoints = 1000;
constexpr double kRefineWidth = 1e-10;
constexpr int kMaxGoldenIterations = 200;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log p as a plain double (-inf allowed); only used inside the optimizer.
double raw_log_density(const BiasModel& model, double x) {
  const double p = model.density(x);
  return p > 0.0 ? std::log(p) : kNegInf;
}

template <class F>
double golden_section_argmax(F&& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kMaxGoldenIterations && b - a > kRefineWidth; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

// Row term L(x)-L(0) for a row with s >= 1 at bias beta; no feasibility
// check.
ExtendedReal support_row_term(const RowObservation& row, double beta,
                              const BiasModel& model) {
  return log_density(model, beta) - log_density(model, row.y_min_pos());
}

std::string row_message(const char* what, Eigen::Index row,
                        const std::string& detail) {
  std::ostringstream os;
  os << what << " row " << row << ": " << detail;
  return os.str();
}

}  // namespace

RowObservation row_support(const Eigen::Ref<const Vector>& y_row,
                           Eigen::Index index) {
  RowObservation row;
  row.index = index;
  row.n = y_row.size();
  for (Eigen::Index j = 0; j < y_row.size(); ++j) {
    const double y = y_row(j);
    if (!(y >= 0.0)) {
      throw InvalidArgumentError(row_message(
          "observation", index,
          "entry " + std::to_string(j) + " is negative or not a number"));
    }
    if (y > 0.0) {
      row.support.push_back(j);
      row.positive_values.push_back(y);
      if (!row.min_pos_column || y < y_row(*row.min_pos_column)) {
        row.min_pos_column = j;
      }
    }
  }
  std::sort(row.positive_values.begin(), row.positive_values.end(),
            std::greater<>());
  return row;
}

FeasibleInterval feasible_bias_interval(const RowObservation& row,
                                        double gamma, double nu) {
  if (row.s() == 0) {
    throw InvalidArgumentError(
        row_message("feasible_bias_interval:", row.index, "empty support"));
  }
  FeasibleInterval interval;
  interval.lo = row.y_max() - gamma;
  interval.hi = row.y_min_pos() + gamma;
  if (row.s() < row.n) {
    interval.hi = std::min(interval.hi, row.y_min_pos() + gamma - nu);
  }
  return interval;
}

ExtendedReal log_density(const BiasModel& model, double x) {
  const double p = model.density(x);
  if (p > 0.0) return ExtendedReal(std::log(p));
  return ExtendedReal::negative_infinity();
}

ExtendedReal row_log_likelihood(const RowObservation& row, double beta,
                                const BiasModel& model, double gamma,
                                double nu) {
  const FeasibleInterval interval = feasible_bias_interval(row, gamma, nu);
  if (!interval.contains(beta, 1e-9 * (1.0 + std::abs(beta)))) {
    throw InfeasibleMatrixError(row_message(
        "row_log_likelihood:", row.index,
        "beta=" + text::format_double(beta) + " outside [" +
            text::format_double(interval.lo) + ", " +
            text::format_double(interval.hi) + "]"));
  }
  return support_row_term(row, beta, model);
}

ExtendedReal empty_row_log_likelihood(double x_star, const BiasModel& model) {
  const auto log_mass = [&model](double x) {
    const double mass = model.cdf(-x);
    return mass > 0.0 ? ExtendedReal(std::log(mass))
                      : ExtendedReal::negative_infinity();
  };
  return log_mass(x_star) - log_mass(0.0);
}

RowMle estimate_row_bias(const RowObservation& row, const BiasModel& model,
                         double gamma, double nu) {
  if (row.s() == 0) {
    throw InvalidArgumentError(
        row_message("estimate_row_bias:", row.index, "needs s >= 1"));
  }
  const FeasibleInterval interval = feasible_bias_interval(row, gamma, nu);
  if (interval.lo > interval.hi) {
    throw InfeasibleRowError(static_cast<std::size_t>(row.index), interval.lo,
                             interval.hi);
  }

  const auto objective = [&model](double beta) {
    return raw_log_density(model, beta);
  };

  // The analytic mode goes first so that it wins ties against nearby
  // optimizer iterates whose log-density rounds to the same value.
  std::vector<double> candidates;
  if (interval.hi > interval.lo && interval.contains(model.mode())) {
    candidates.push_back(model.mode());
  }
  candidates.push_back(interval.lo);
  candidates.push_back(interval.hi);
  if (interval.hi > interval.lo) {
    const double step =
        (interval.hi - interval.lo) / static_cast<double>(kCoarseGridPoints - 1);
    int best_index = 0;
    double best_value = kNegInf;
    for (int i = 0; i < kCoarseGridPoints; ++i) {
      const double beta = i == kCoarseGridPoints - 1
                              ? interval.hi
                              : interval.lo + step * static_cast<double>(i);
      const double value = objective(beta);
      if (value > best_value) {
        best_value = value;
        best_index = i;
      }
    }
    const double a = std::max(interval.lo, interval.lo + step * (best_index - 1));
    const double b = std::min(interval.hi, interval.lo + step * (best_index + 1));
    candidates.push_back(interval.lo + step * best_index);
    candidates.push_back(golden_section_argmax(objective, a, b));
  }

  double beta_hat = candidates.front();
  double best = objective(beta_hat);
  for (const double beta : candidates) {
    const double value = objective(beta);
    if (value > best) {
      best = value;
      beta_hat = beta;
    }
  }

  RowMle mle;
  mle.beta_hat = beta_hat;
  mle.feasible = interval;
  mle.loglik = support_row_term(row, beta_hat, model);
  mle.status = (beta_hat > interval.lo && beta_hat < interval.hi)
                   ? RowStatus::kInterior
                   : RowStatus::kBoundary;
  return mle;
}

FillStrategy parse_fill_strategy(std::string_view name) {
  name = text::trim(name);
  if (name == "upper" || name == "upper_boundary") {
    return FillStrategy::kUpperBoundary;
  }
  if (name == "lower" || name == "lower_boundary") {
    return FillStrategy::kLowerBoundary;
  }
  if (name == "mid" || name == "midpoint") return FillStrategy::kMidpoint;
  throw InvalidArgumentError("unknown fill strategy '" + std::string(name) +
                             "' (expected upper, lower or mid)");
}

std::string to_string(FillStrategy fill) {
  switch (fill) {
    case FillStrategy::kUpperBoundary:
      return "upper";
    case FillStrategy::kLowerBoundary:
      return "lower";
    case FillStrategy::kMidpoint:
      return "mid";
  }
  return "mid";
}

EstimatedMatrix reconstruct_matrix(const Matrix& Y, const BiasModel& model,
                                   double gamma, double nu, FillStrategy fill,
                                   Execution exec) {
  if (!(gamma > 0.0)) throw InvalidArgumentError("gamma must be positive");
  if (!(nu > 0.0)) throw InvalidArgumentError("nu must be positive");

  const Eigen::Index d = Y.rows();
  const Eigen::Index n = Y.cols();
  EstimatedMatrix est;
  est.M_hat.resize(d, n);
  est.beta_hats.assign(static_cast<std::size_t>(d), std::nullopt);
  est.row_status.assign(static_cast<std::size_t>(d), RowStatus::kBoundary);
  est.row_loglik.assign(static_cast<std::size_t>(d), ExtendedReal(0.0));
  est.fill = fill;
  est.gamma = gamma;
  est.nu = nu;

  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(d));

  const auto solve_row = [&](Eigen::Index i) {
    const auto ui = static_cast<std::size_t>(i);
    try {
      const RowObservation row = row_support(Y.row(i).transpose(), i);
      if (row.s() == 0) {
        // F(inf, x) is decreasing in x, so every entry sits at -gamma.
        est.M_hat.row(i).setConstant(-gamma);
        est.row_status[ui] = RowStatus::kEmptySupportRow;
        est.row_loglik[ui] = empty_row_log_likelihood(-gamma, model);
        return;
      }
      const RowMle mle = estimate_row_bias(row, model, gamma, nu);
      const double top = row.y_min_pos() - mle.beta_hat;
      const double upper = std::max(top - nu, -gamma);
      double off_value = 0.0;
      switch (fill) {
        case FillStrategy::kUpperBoundary:
          off_value = upper;
          break;
        case FillStrategy::kLowerBoundary:
          off_value = -gamma;
          break;
        case FillStrategy::kMidpoint:
          off_value = 0.5 * (-gamma + upper);
          break;
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        est.M_hat(i, j) =
            Y(i, j) > 0.0 ? Y(i, j) - mle.beta_hat : off_value;
      }
      est.beta_hats[ui] = mle.beta_hat;
      est.row_status[ui] = mle.status;
      est.row_loglik[ui] = mle.loglik;
    } catch (...) {
      failures[ui] = std::current_exception();
    }
  };

  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < d; ++i) solve_row(i);
  } else {
    for (Eigen::Index i = 0; i < d; ++i) solve_row(i);
  }

  // Report the lowest failing row regardless of scheduling order.
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  est.total_loglik = ExtendedReal(0.0);
  for (const auto& term : est.row_loglik) est.total_loglik += term;

  if (auto violation = find_constraint_violation(est.M_hat, Y, gamma, nu)) {
    throw InfeasibleMatrixError("reconstruct_matrix produced M_hat outside "
                                "the constraint set: " + *violation);
  }
  return est;
}

std::optional<std::string> find_constraint_violation(const Matrix& X,
                                                     const Matrix& Y,
                                                     double gamma, double nu,
                                                     double tol) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    return "shape " + std::to_string(X.rows()) + "x" +
           std::to_string(X.cols()) + " differs from Y's " +
           std::to_string(Y.rows()) + "x" + std::to_string(Y.cols());
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double shift = 0.0;
    bool have_shift = false;
    double min_on = HUGE_VAL;
    double max_off = -HUGE_VAL;
    bool any_off = false;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double x = X(i, j);
      if (!(std::abs(x) <= gamma + tol)) {
        return row_message("entry out of box in", i,
                           "|X(" + std::to_string(i) + "," + std::to_string(j) +
                               ")| = " + text::format_double(std::abs(x)) +
                               " > gamma");
      }
      if (Y(i, j) > 0.0) {
        const double diff = Y(i, j) - x;
        if (!have_shift) {
          shift = diff;
          have_shift = true;
        } else if (std::abs(diff - shift) > tol) {
          return row_message("non-constant shift in", i,
                             "Y - X varies on the support by " +
                                 text::format_double(std::abs(diff - shift)));
        }
        min_on = std::min(min_on, x);
      } else {
        max_off = std::max(max_off, x);
        any_off = true;
      }
    }
    if (have_shift && any_off && min_on - max_off < nu - tol) {
      return row_message("margin violated in", i,
                         "smallest support entry clears the largest "
                         "off-support entry by " +
                             text::format_double(min_on - max_off) +
                             " < nu = " + text::format_double(nu));
    }
  }
  return std::nullopt;
}

ExtendedReal log_likelihood_gap(const Matrix& M, const Matrix& X,
                                const Matrix& Y, const BiasModel& model,
                                double gamma, double nu) {
  if (auto violation = find_constraint_violation(M, Y, gamma, nu)) {
    throw InfeasibleMatrixError("log_likelihood_gap: M: " + *violation);
  }
  if (auto violation = find_constraint_violation(X, Y, gamma, nu)) {
    throw InfeasibleMatrixError("log_likelihood_gap: X: " + *violation);
  }
  ExtendedReal gap(0.0);
  for (Eigen::Index i = 0; i < Y.rows(); ++i) {
    const RowObservation row = row_support(Y.row(i).transpose(), i);
    if (row.s() == 0) {
      gap += empty_row_log_likelihood(M.row(i).maxCoeff(), model) -
             empty_row_log_likelihood(X.row(i).maxCoeff(), model);
      continue;
    }
    const Eigen::Index j = *row.min_pos_column;
    const double beta_m = Y(i, j) - M(i, j);
    const double beta_x = Y(i, j) - X(i, j);
    gap += log_density(model, beta_m) - log_density(model, beta_x);
  }
  return gap;
}

double theoretical_rep_bound(const BiasConstants& constants, Eigen::Index d,
                             double c0) {
  if (!(constants.beta > 0.0)) {
    throw VacuousBoundError("flatness constant beta is zero; bound is vacuous");
  }
  if (!(constants.omega > 0.0)) {
    throw VacuousBoundError("window mass omega is zero; bound is vacuous");
  }
  return c0 * constants.lipschitz * constants.gamma * static_cast<double>(d) /
         (constants.beta * constants.omega);
}

}  // namespace relurep
