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

#include "relurep/restricted_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "relurep/errors.hpp"
#include "relurep/random.hpp"

namespace relurep {

double off_support_l1_budget(const RestrictedSetParams& params, Eigen::Index d,
                             Eigen::Index k, double h_norm, double f_s_l1) {
  if (!(params.lambda > 0.0)) {
    throw InvalidArgumentError("restricted set needs lambda > 0");
  }
  const double dd = static_cast<double>(d);
  const double sk = std::sqrt(static_cast<double>(k));
  const double width =
      params.width_constant * (sk * params.sigma + params.eta) / std::sqrt(dd) +
      sk * params.at_w_inf_norm / dd;
  return (2.0 * width * h_norm + 3.0 * params.lambda * f_s_l1) / params.lambda;
}

RestrictedSetReport check_restricted_lower_bound(
    const Matrix& A, std::size_t samples, const RestrictedSetParams& params,
    std::uint64_t seed) {
  const Eigen::Index d = A.rows();
  const Eigen::Index k = A.cols();
  const auto s = static_cast<Eigen::Index>(params.support.size());
  if (4 * (k + s) > d) {
    throw InvalidArgumentError("restricted set check needs k + |S| <= d / 4");
  }
  std::vector<char> on_support(static_cast<std::size_t>(d), 0);
  for (Eigen::Index i : params.support) {
    if (i < 0 || i >= d) throw InvalidArgumentError("support index out of range");
    on_support[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<Eigen::Index> off;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!on_support[static_cast<std::size_t>(i)]) off.push_back(i);
  }

  auto rng = make_stream(seed, Stream::kProbe);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Scales spread over three decades so both terms get to dominate.
  auto log_scale = [&] { return std::pow(10.0, -1.5 + 3.0 * unit(rng)); };

  RestrictedSetReport report;
  const double dd = static_cast<double>(d);
  for (std::size_t t = 0; t < samples; ++t) {
    Vector h = Vector::Zero(k);
    Vector f = Vector::Zero(d);
    if (t > 0) {
      // Cycle through (h and f), (h only), (f only).
      const std::size_t kind = t % 3;
      if (kind != 2) {
        for (Eigen::Index j = 0; j < k; ++j) h(j) = normal(rng);
        h *= log_scale() / h.norm();
      }
      double f_s_l1 = 0.0;
      if (kind != 1 && s > 0) {
        const double scale = log_scale() * std::sqrt(dd);
        Vector fs(s);
        for (Eigen::Index j = 0; j < s; ++j) fs(j) = normal(rng);
        fs *= scale / fs.norm();
        for (Eigen::Index j = 0; j < s; ++j) f(params.support[j]) = fs(j);
        f_s_l1 = fs.lpNorm<1>();
      }
      if (kind != 1) {
        const double budget =
            unit(rng) * off_support_l1_budget(params, d, k, h.norm(), f_s_l1);
        if (budget > 0.0 && !off.empty()) {
          std::uniform_int_distribution<std::size_t> count(1, off.size());
          const std::size_t m = count(rng);
          std::vector<Eigen::Index> pick = off;
          std::shuffle(pick.begin(), pick.end(), rng);
          Vector g(static_cast<Eigen::Index>(m));
          for (std::size_t j = 0; j < m; ++j) g(j) = normal(rng);
          g *= budget / g.lpNorm<1>();
          for (std::size_t j = 0; j < m; ++j) f(pick[j]) = g(j);
        }
      }
    }
    const double lhs = (A * h + f).squaredNorm() / (2.0 * dd);
    const double r = h.norm() + f.norm() / std::sqrt(dd);
    const double rhs = r * r / 128.0;
    ++report.num_checked;
    if (lhs < rhs) ++report.num_violations;
    if (rhs > 0.0) {
      report.min_ratio = std::min(report.min_ratio, ExtendedReal(lhs / rhs),
                                  [](const ExtendedReal& a, const ExtendedReal& b) {
                                    return a < b;
                                  });
    }
  }
  return report;
}

}  // namespace relurep
