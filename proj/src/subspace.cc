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

#include "relurep/subspace.hpp"

#include <algorithm>
#include <cmath>

#include "relurep/errors.hpp"

namespace relurep {

TruncatedSvd truncated_svd(const Matrix& M, Eigen::Index k) {
  if (k < 1 || k > std::min(M.rows(), M.cols())) {
    throw InvalidArgumentError("truncated_svd needs 1 <= k <= min(d, n)");
  }
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSvd out;
  out.U = svd.matrixU().leftCols(k);
  out.S = svd.singularValues().head(k);
  out.V = svd.matrixV().leftCols(k);
  out.all_singular_values = svd.singularValues();
  out.rank_deficient = out.S(k - 1) < 1e-12;
  return out;
}

ProcrustesResult procrustes_align(const Matrix& U, const Matrix& U_hat) {
  if (U.rows() != U_hat.rows() || U.cols() != U_hat.cols()) {
    throw DimensionMismatchError("procrustes_align: U and U_hat differ in shape");
  }
  const Matrix cross = U_hat.transpose() * U;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesResult out;
  out.O = svd.matrixU() * svd.matrixV().transpose();
  out.error = (U - U_hat * out.O).norm();
  return out;
}

double sin_theta_distance(const Matrix& U, const Matrix& U_hat) {
  if (U.rows() != U_hat.rows() || U.cols() != U_hat.cols()) {
    throw DimensionMismatchError("sin_theta_distance: shapes differ");
  }
  const double k = static_cast<double>(U.cols());
  const double overlap = (U.transpose() * U_hat).squaredNorm();
  return std::sqrt(std::max(0.0, k - overlap));
}

double subspace_perturbation_bound(double sigma_1, double sigma_k,
                                   double e_frobenius) {
  if (!(sigma_k > 0.0)) {
    throw VacuousBoundError("sigma_k is zero; subspace bound is vacuous");
  }
  return std::pow(2.0, 1.5) * (2.0 * sigma_1 + e_frobenius) * e_frobenius /
         (sigma_k * sigma_k);
}

}  // namespace relurep
