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

#include "relurep/robust_lasso.hpp"

#include <algorithm>
#include <cmath>

#include "relurep/errors.hpp"

namespace relurep {

std::string to_string(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::kExplicit:
      return "explicit";
    case LambdaMode::kOracle:
      return "oracle";
    case LambdaMode::kAgnostic:
      return "agnostic";
  }
  return "explicit";
}

Vector soft_threshold(const Vector& x, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgumentError("soft_threshold: tau < 0");
  return x.unaryExpr([tau](double xi) {
    const double m = std::abs(xi) - tau;
    return m > 0.0 ? std::copysign(m, xi) : 0.0;
  });
}

double lasso_objective(const Vector& v, const Matrix& A, const Vector& c,
                       const Vector& e, double lambda) {
  if (A.rows() != v.size() || A.cols() != c.size() || e.size() != v.size()) {
    throw DimensionMismatchError("lasso_objective: shapes of v, A, c, e");
  }
  const double d = static_cast<double>(v.size());
  return (v - A * c - e).squaredNorm() / (2.0 * d) + lambda * e.lpNorm<1>();
}

LassoSolution solve_robust_lasso(const Vector& v, const Matrix& A,
                                 const LassoConfig& cfg) {
  if (A.rows() != v.size()) {
    throw DimensionMismatchError("solve_robust_lasso: A has " +
                                 std::to_string(A.rows()) + " rows, v has " +
                                 std::to_string(v.size()) + " entries");
  }
  if (A.rows() <= A.cols()) {
    throw InvalidArgumentError("solve_robust_lasso needs d > k");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw InvalidArgumentError("solve_robust_lasso: tol > 0, max_iter >= 1");
  }
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw InvalidArgumentError("solve_robust_lasso: lambda must be >= 0");
  }
  const Eigen::JacobiSVD<Matrix> svd(A);
  const double smallest = svd.singularValues().minCoeff();
  if (!(smallest > 1e-10)) {
    throw RankDeficiencyError("A is rank deficient (smallest singular value " +
                              std::to_string(smallest) + ")");
  }
  const Eigen::HouseholderQR<Matrix> qr(A);
  const double d = static_cast<double>(A.rows());
  const double tau = d * cfg.lambda;

  LassoSolution sol;
  sol.e_hat = Vector::Zero(v.size());
  sol.c_hat = qr.solve(v);
  double previous = lasso_objective(v, A, sol.c_hat, sol.e_hat, cfg.lambda);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    sol.e_hat = soft_threshold(v - A * sol.c_hat, tau);
    sol.c_hat = qr.solve(v - sol.e_hat);
    const double obj = lasso_objective(v, A, sol.c_hat, sol.e_hat, cfg.lambda);
    sol.objective_trace.push_back(obj);
    sol.iterations = it;
    const double change = std::abs(previous - obj);
    if (change <= cfg.tol * std::max(std::abs(previous), 1e-300)) {
      sol.converged = true;
      break;
    }
    previous = obj;
  }
  return sol;
}

double oracle_lambda(const RecoveryInstance& instance,
                     const NonlinearityStats& stats) {
  const Vector ac = instance.A * instance.c_star;
  const Vector z = relu_map(ac + instance.b) - stats.mu * ac;
  const double lam =
      2.0 * (z + instance.w).lpNorm<Eigen::Infinity>() /
      static_cast<double>(instance.d());
  return lam > 0.0 ? lam : 1e-12;
}

double agnostic_lambda(Eigen::Index d, double sigma, double delta) {
  const double dd = static_cast<double>(d);
  return 4.0 * (sigma * std::sqrt(2.0 * std::log(2.0 * dd)) + delta) / dd;
}

double recovery_bound(Eigen::Index k, Eigen::Index s, Eigen::Index d,
                      double c_tilde) {
  const double kk = static_cast<double>(k);
  const double ss = static_cast<double>(s);
  const double dd = static_cast<double>(d);
  const double k_term = k == 1 ? kk : kk * std::log(kk);
  return c_tilde *
         std::max(std::sqrt(k_term / dd), std::sqrt(ss * std::log(dd) / dd));
}

RecoveryErrorBound recovery_error_and_bound(const LassoSolution& sol,
                                            const RecoveryInstance& instance,
                                            const NonlinearityStats& stats,
                                            double c_tilde) {
  if (sol.c_hat.size() != instance.c_star.size() ||
      sol.e_hat.size() != instance.e_star.size()) {
    throw DimensionMismatchError("recovery_error_and_bound: solution shape");
  }
  RecoveryErrorBound out;
  const double d = static_cast<double>(instance.d());
  out.error = (stats.mu * instance.c_star - sol.c_hat).norm() +
              (instance.e_star - sol.e_hat).norm() / std::sqrt(d);
  out.bound = recovery_bound(instance.k(), instance.s, instance.d(), c_tilde);
  return out;
}

KktResiduals kkt_residuals(const Vector& v, const Matrix& A,
                           const LassoSolution& sol, double lambda) {
  const double d = static_cast<double>(A.rows());
  const Vector r = (v - A * sol.c_hat - sol.e_hat) / d;
  KktResiduals out;
  out.stationarity_c = (A.transpose() * r).lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double ei = sol.e_hat(i);
    const double gap = ei != 0.0
                           ? std::abs(r(i) - std::copysign(lambda, ei))
                           : std::max(0.0, std::abs(r(i)) - lambda);
    out.stationarity_e = std::max(out.stationarity_e, gap);
  }
  return out;
}

}  // namespace relurep
