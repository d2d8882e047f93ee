// Copyright 2026 The SSPSC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "sspsc/data_model.hpp"

namespace sspsc {

/// Domain means in the shared subspace.
struct MeanEmbeddings {
  Vector mu_s;     // (1/n1) sum theta x_i^s
  Vector mu_t;     // (1/n2) sum theta x_j^t
  Vector mu_s_pi;  // (1/n1) sum theta x_i^s pi_i
  Vector d_raw;    // (1/n1) sum x_i^s pi_i - (1/n2) sum x_j^t, before projection
};

/// Weighted source mean minus target mean in the original feature space.
Vector weighted_mean_difference(const DatasetPair& pair, const Vector& pi);

MeanEmbeddings projected_means(const Matrix& theta, const DatasetPair& pair, const Vector& pi);

/// The symmetric m x m matrix whose trace form theta Phi theta^T is the part
/// of the (theta, w) block objective that depends on theta once w is
/// eliminated:  -(C1/4)(phi + varphi)(phi + varphi)^T + (C3/2) d d^T.
Matrix build_phi(const Vector& phi, const Vector& varphi, const Vector& pi, const DatasetPair& pair,
                 const Hyperparams& hp);

/// Rows are r orthonormal eigenvectors of phi_mat (the smallest eigenvalues by
/// default, ascending). Each row's first nonzero component is positive, and
/// rows with equal eigenvalues are ordered by the index of that component.
/// If every eigenvalue is within 1e-12 of zero, previous is returned unchanged.
Matrix update_theta(const Matrix& phi_mat, int r, const Matrix& previous,
                    ThetaSelection selection = ThetaSelection::kSmallest);

/// w = 1/2 theta (phi + varphi).
Vector update_w(const Matrix& theta, const Vector& phi, const Vector& varphi);

}  // namespace sspsc
