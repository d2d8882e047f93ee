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

#include <utility>
#include <vector>

#include "sspsc/data_model.hpp"
#include "sspsc/neighborhood.hpp"

namespace sspsc {

/// The classifier block: everything in the joint objective that depends on the
/// source classifier phi and the target classifier varphi,
///
///   Q = sum_i L(y_i^s, phi^T x_i^s) pi_i + sum_{j<=n3} L(y_j^t, varphi^T x_j^t)
///     + C1/2 (|phi - s|^2 + |varphi - s|^2) + C2 sum_j (varphi^T r_j)^2,
///
/// where s = theta^T w is the shared classifier lifted to feature space and
/// r_j = x_j^t - sum_k w_jk x_k^t are the target reconstruction residuals.
/// The residuals are precomputed once per dataset.
class ClassifierBlock {
 public:
  ClassifierBlock(const DatasetPair& pair, const NeighborGraph& target_graph, const Hyperparams& hp);

  double objective(const Vector& phi, const Vector& varphi, const Vector& shared,
                   const Vector& pi) const;

  std::pair<Vector, Vector> subgradients(const Vector& phi, const Vector& varphi,
                                         const Vector& shared, const Vector& pi) const;

  struct Descent {
    Vector phi;
    Vector varphi;
    int accepted_steps = 0;
    std::vector<double> q_trace;  // Q before the first step and after each accepted step
  };

  /// Up to max_inner_iters steps of (phi, varphi) -= rho * gradient. A step is
  /// kept only if Q strictly decreases; otherwise rho is halved for that step,
  /// at most 20 times, after which descent stops.
  Descent descend(const Vector& phi, const Vector& varphi, const Vector& shared,
                  const Vector& pi) const;

  /// Target reconstruction residuals r_j as rows (n2 x m).
  const Matrix& target_residuals() const { return residuals_; }

 private:
  const DatasetPair& pair_;
  Hyperparams hp_;
  Matrix residuals_;
  Matrix residual_gram_;  // R^T R
};

double q_objective(const Vector& phi, const Vector& varphi, const Matrix& theta, const Vector& w,
                   const Vector& pi, const DatasetPair& pair, const NeighborGraph& target_graph,
                   const Hyperparams& hp);

std::pair<Vector, Vector> q_subgradients(const Vector& phi, const Vector& varphi,
                                         const Matrix& theta, const Vector& w, const Vector& pi,
                                         const DatasetPair& pair,
                                         const NeighborGraph& target_graph, const Hyperparams& hp);

/// One classifier block update on state (phi, varphi replaced; u, v refreshed).
ClassifierBlock::Descent update_phi_varphi(const ModelState& state, const DatasetPair& pair,
                                           const NeighborGraph& target_graph, const Hyperparams& hp);

/// u = phi - theta^T w, v = varphi - theta^T w.
std::pair<Vector, Vector> recover_u_v(const Matrix& theta, const Vector& w, const Vector& phi,
                                      const Vector& varphi);

struct Prediction {
  double score = 0.0;
  int label = 1;
};

/// score = varphi^T x, label +1 when score >= 0.
Prediction predict_target(const Vector& varphi, const Vector& x);
/// score = phi^T x, same labeling rule.
Prediction predict_source(const Vector& phi, const Vector& x);

}  // namespace sspsc
