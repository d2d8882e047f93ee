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
#include "sspsc/neighborhood.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "sspsc/errors.hpp"
#include "sspsc/qp_solver.hpp"

namespace sspsc {

Vector NeighborGraph::residuals(const Vector& values) const {
  Vector out = values;
  for (Index i = 0; i < size(); ++i) {
    for (Index j = 0; j < k(); ++j) out(i) -= coeffs(i, j) * values(neighbors(i, j));
  }
  return out;
}

Matrix NeighborGraph::residuals(const Matrix& points) const {
  Matrix out = points;
  for (Index i = 0; i < size(); ++i) {
    for (Index j = 0; j < k(); ++j) out.row(i) -= coeffs(i, j) * points.row(neighbors(i, j));
  }
  return out;
}

Matrix NeighborGraph::dense_weights() const {
  Matrix w = Matrix::Zero(size(), size());
  for (Index i = 0; i < size(); ++i) {
    for (Index j = 0; j < k(); ++j) w(i, neighbors(i, j)) += coeffs(i, j);
  }
  return w;
}

Eigen::MatrixXi build_knn(const Matrix& points, int k) {
  const Index n = points.rows();
  if (k < 1 || k > n - 1) {
    throw ValidationError("neighbor count k = " + std::to_string(k) + " needs 1 <= k <= n - 1 = " +
                          std::to_string(n - 1));
  }
  Eigen::MatrixXi result(n, k);
  std::vector<std::pair<double, Index>> dist(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t slot = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist[slot++] = {(points.row(i) - points.row(j)).squaredNorm(), j};
    }
    // pair ordering: distance, then index
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    for (int c = 0; c < k; ++c) result(i, c) = static_cast<int>(dist[c].second);
  }
  return result;
}

Vector solve_reconstruction(const Vector& x, const Matrix& neighbors) {
  const Index k = neighbors.rows();
  if (k < 1) throw ValidationError("reconstruction needs at least one neighbor");
  if (neighbors.cols() != x.size()) throw ValidationError("reconstruction dimension mismatch");
  if (!x.allFinite() || !neighbors.allFinite()) {
    throw ValidationError("non-finite input to reconstruction");
  }
  // With sum(w) = 1, |x - N^T w|^2 = w^T C w where C is the Gram matrix of n_c - x.
  const Matrix diffs = neighbors.rowwise() - x.transpose();
  Matrix gram = diffs * diffs.transpose();
  if (!gram.allFinite()) throw NumericError("reconstruction Gram matrix overflowed");
  gram.diagonal().array() += kReconstructionRidge;
  QpProblem qp;
  qp.hessian = 2.0 * gram;
  qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose()).eval();
  qp.linear = Vector::Zero(k);
  qp.lower = Vector::Zero(k);
  qp.upper = Vector::Ones(k);
  qp.eq_sum = 1.0;
  return solve_qp(qp);
}

double reconstruction_error(const Vector& x, const Matrix& neighbors, const Vector& w) {
  return (x - neighbors.transpose() * w).squaredNorm();
}

NeighborGraph build_graph(const Matrix& points, int k) {
  NeighborGraph graph;
  graph.neighbors = build_knn(points, k);
  const Index n = points.rows();
  graph.coeffs.resize(n, k);
  Matrix local(k, points.cols());
  for (Index i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) local.row(c) = points.row(graph.neighbors(i, c));
    graph.coeffs.row(i) = solve_reconstruction(points.row(i).transpose(), local).transpose();
  }
  return graph;
}

}  // namespace sspsc
