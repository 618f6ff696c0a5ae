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

#include <Eigen/Dense>

#include "relurep/relu_generative.hpp"

namespace relurep {

struct TruncatedSvd {
  Matrix U;  // d x k, orthonormal columns
  Vector S;  // k leading singular values, descending
  Matrix V;  // n x k, orthonormal columns
  // S(k-1) < 1e-12: the k-dimensional subspace is ill-defined.
  bool rank_deficient = false;
  // All min(d, n) singular values, for residual and gap computations.
  Vector all_singular_values;
};

TruncatedSvd truncated_svd(const Matrix& M, Eigen::Index k);

struct ProcrustesResult {
  Matrix O;  // k x k orthogonal
  double error = 0.0;  // ||U - U_hat O||_F
};

// Orthogonal O minimizing ||U - U_hat O||_F: with U_hat^T U = P S Q^T,
// O = P Q^T.
ProcrustesResult procrustes_align(const Matrix& U, const Matrix& U_hat);

// Frobenius norm of the sines of the canonical angles between span(U) and
// span(U_hat): sqrt(k - ||U^T U_hat||_F^2), clamped at zero.
double sin_theta_distance(const Matrix& U, const Matrix& U_hat);

// 2^{3/2} (2 sigma_1 + ||E||_F) ||E||_F / sigma_k^2: the Procrustes error
// bound for the leading-k left singular subspace of a rank-k matrix M under
// an additive perturbation E.
double subspace_perturbation_bound(double sigma_1, double sigma_k,
                                   double e_frobenius);

}  // namespace relurep
