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

/// k nearest neighbors of every point (self excluded) together with the
/// convex-combination coefficients that best reconstruct the point from them.
/// Row i of neighbors and coeffs are aligned.
struct NeighborGraph {
  Eigen::MatrixXi neighbors;  // n x k
  Matrix coeffs;              // n x k, each row on the probability simplex

  Index size() const { return neighbors.rows(); }
  Index k() const { return neighbors.cols(); }

  /// values(i) - sum_k coeffs(i, k) * values(neighbors(i, k)) for every i.
  Vector residuals(const Vector& values) const;
  /// Same, applied to every column of points (n x m).
  Matrix residuals(const Matrix& points) const;
  /// Dense n x n matrix W with W(i, neighbors(i, k)) = coeffs(i, k).
  Matrix dense_weights() const;
};

/// Euclidean k-nearest neighbors; ties go to the smaller index.
/// Throws ValidationError unless 1 <= k <= n - 1.
Eigen::MatrixXi build_knn(const Matrix& points, int k);

/// Ridge added to the neighbor Gram matrix before solving for coefficients.
inline constexpr double kReconstructionRidge = 1e-8;

/// Coefficients w on the simplex minimizing |x - sum_k w_k neighbors.row(k)|^2.
Vector solve_reconstruction(const Vector& x, const Matrix& neighbors);

/// Squared reconstruction error |x - neighbors^T w|^2.
double reconstruction_error(const Vector& x, const Matrix& neighbors, const Vector& w);

NeighborGraph build_graph(const Matrix& points, int k);

}  // namespace sspsc
