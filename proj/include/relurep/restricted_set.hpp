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
#include <vector>

#include "relurep/extended_real.hpp"
#include "relurep/relu_generative.hpp"

namespace relurep {

struct RestrictedSetParams {
  double lambda = 0.0;
  double sigma = 0.0;
  double eta = 0.0;
  std::vector<Eigen::Index> support;  // S, indices into [0, d)
  double at_w_inf_norm = 0.0;         // ||A^T w||_inf
  // Absolute constant C in the off-support l1 budget; not pinned down by the
  // theory, so it is a parameter.
  double width_constant = 1.0;
};

struct RestrictedSetReport {
  std::size_t num_checked = 0;
  std::size_t num_violations = 0;
  // min over samples of LHS / RHS; +inf when every sample had RHS == 0.
  ExtendedReal min_ratio = ExtendedReal::positive_infinity();
};

// Largest ||f_{S^c}||_1 admitted for (h, f_S) by the restricted set:
// [2 (C (sqrt(k) sigma + eta) / sqrt(d) + sqrt(k) ||A^T w||_inf / d) ||h||
//  + 3 lambda ||f_S||_1] / lambda.
double off_support_l1_budget(const RestrictedSetParams& params, Eigen::Index d,
                             Eigen::Index k, double h_norm, double f_s_l1);

// Draws `samples` pairs (h, f) from the restricted set (the first is the zero
// pair) and checks (1/2d) ||A h + f||^2 >= (||h|| + ||f|| / sqrt(d))^2 / 128.
RestrictedSetReport check_restricted_lower_bound(
    const Matrix& A, std::size_t samples, const RestrictedSetParams& params,
    std::uint64_t seed);

}  // namespace relurep
