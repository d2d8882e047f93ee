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
#include "sspsc/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

Index first_nonzero(const Vector& v) {
  const double cut = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) return i;
  }
  return 0;
}

}  // namespace

Vector weighted_mean_difference(const DatasetPair& pair, const Vector& pi) {
  if (pi.size() != pair.n1()) throw ValidationError("dimension mismatch: π has wrong length");
  if (pair.target_features.cols() != pair.dim()) throw ValidationError("dimension mismatch");
  const Vector source = pair.source_features.transpose() * pi / static_cast<double>(pair.n1());
  const Vector target = pair.target_features.colwise().mean().transpose();
  return source - target;
}

MeanEmbeddings projected_means(const Matrix& theta, const DatasetPair& pair, const Vector& pi) {
  if (theta.cols() != pair.dim()) throw ValidationError("dimension mismatch: theta vs features");
  MeanEmbeddings out;
  const double n1 = static_cast<double>(pair.n1());
  out.d_raw = weighted_mean_difference(pair, pi);
  out.mu_s = theta * pair.source_features.colwise().mean().transpose();
  out.mu_t = theta * pair.target_features.colwise().mean().transpose();
  out.mu_s_pi = theta * (pair.source_features.transpose() * pi) / n1;
  return out;
}

Matrix build_phi(const Vector& phi, const Vector& varphi, const Vector& pi, const DatasetPair& pair,
                 const Hyperparams& hp) {
  const Index m = pair.dim();
  if (phi.size() != m || varphi.size() != m) throw ValidationError("dimension mismatch: classifier vectors");
  const Vector sum = phi + varphi;
  const Vector d = weighted_mean_difference(pair, pi);
  Matrix out = -(hp.c1 / 4.0) * sum * sum.transpose() + (hp.c3 / 2.0) * d * d.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix update_theta(const Matrix& phi_mat, int r, const Matrix& previous, ThetaSelection selection) {
  const Index m = phi_mat.rows();
  if (phi_mat.cols() != m) throw ValidationError("subspace matrix must be square");
  if (r < 1 || r > m) throw ValidationError("subspace dimension out of range");
  if (!phi_mat.allFinite()) throw NumericError("eigendecomposition of a non-finite matrix");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(phi_mat);
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const Vector& values = eig.eigenvalues();  // ascending
  if (values.cwiseAbs().maxCoeff() <= 1e-12 && previous.rows() == r && previous.cols() == m) {
    return previous;
  }

  Matrix vectors = eig.eigenvectors();
  std::vector<Index> lead(static_cast<std::size_t>(m));
  for (Index c = 0; c < m; ++c) {
    lead[c] = first_nonzero(vectors.col(c));
    if (vectors(lead[c], c) < 0.0) vectors.col(c) = -vectors.col(c);
  }

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  if (selection == ThetaSelection::kLargest) std::reverse(order.begin(), order.end());

  // Within a run of equal eigenvalues, order by leading-component index.
  const double tie = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && std::abs(values(order[end]) - values(order[begin])) <= tie) ++end;
    std::stable_sort(order.begin() + begin, order.begin() + end,
                     [&](Index a, Index b) { return lead[a] < lead[b]; });
    begin = end;
  }

  Matrix theta(r, m);
  for (int row = 0; row < r; ++row) theta.row(row) = vectors.col(order[row]).transpose();
  return theta;
}

Vector update_w(const Matrix& theta, const Vector& phi, const Vector& varphi) {
  if (phi.size() != theta.cols() || varphi.size() != theta.cols()) {
    throw ValidationError("dimension mismatch: theta vs classifier vectors");
  }
  return 0.5 * theta * (phi + varphi);
}

}  // namespace sspsc
