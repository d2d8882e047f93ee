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
#include "sspsc/weights.hpp"

#include "sspsc/errors.hpp"
#include "sspsc/losses.hpp"

namespace sspsc {

WeightStepProblem build_weight_problem(const ModelState& state, const DatasetPair& pair,
                                       const NeighborGraph& source_graph, const Hyperparams& hp) {
  const Index n1 = pair.n1();
  if (source_graph.size() != n1) {
    throw ValidationError("dimension mismatch: source graph does not cover the source set");
  }
  if (state.phi.size() != pair.dim() || state.theta.cols() != pair.dim()) {
    throw ValidationError("dimension mismatch between model and data");
  }
  WeightStepProblem p;
  p.n1 = n1;
  p.c3 = hp.c3;
  p.delta = hp.delta;

  const Vector fs = pair.source_features * state.phi;
  p.tau.resize(n1);
  for (Index i = 0; i < n1; ++i) p.tau(i) = loss_value(hp.loss, pair.source_labels[i], fs(i));

  // sum_i (a_i - w_i)(a_i - w_i)^T with a_i the i-th unit vector is (I - W)^T (I - W).
  Matrix i_minus_w = -source_graph.dense_weights();
  i_minus_w.diagonal().array() += 1.0;
  p.recon_quad = hp.c2 * (i_minus_w.transpose() * i_minus_w);

  p.gamma = state.theta * pair.source_features.transpose() / static_cast<double>(n1);
  p.vartheta = state.theta * pair.target_features.colwise().mean().transpose();
  return p;
}

double weight_objective(const WeightStepProblem& p, const Vector& pi) {
  return p.tau.dot(pi) + pi.dot(p.recon_quad * pi) +
         0.5 * p.c3 * (p.gamma * pi - p.vartheta).squaredNorm();
}

QpProblem to_qp(const WeightStepProblem& p) {
  QpProblem qp;
  qp.hessian = 2.0 * p.recon_quad + p.c3 * (p.gamma.transpose() * p.gamma);
  qp.hessian = (0.5 * (qp.hessian + qp.hessian.transpose())).eval();
  qp.linear = p.tau - p.c3 * (p.gamma.transpose() * p.vartheta);
  qp.lower = Vector::Zero(p.n1);
  qp.upper = Vector::Constant(p.n1, p.delta);
  qp.eq_sum = static_cast<double>(p.n1);
  return qp;
}

Vector update_pi(const WeightStepProblem& p) {
  return update_pi(p, Vector::Ones(p.n1));
}

Vector update_pi(const WeightStepProblem& p, const Vector& previous) {
  if (p.delta < 1.0) throw ValidationError("δ < 1 makes π constraints infeasible");
  return solve_qp(to_qp(p), previous);
}

}  // namespace sspsc
