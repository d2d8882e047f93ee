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
#include "sspsc/neighborhood.hpp"
#include "sspsc/qp_solver.hpp"

namespace sspsc {

/// The source-weight subproblem with theta and phi held fixed:
///
///   min  tau^T pi + pi^T R pi + C3/2 |Gamma pi - vartheta|^2
///   s.t. 0 <= pi <= delta, sum(pi) = n1
///
/// with tau_i the current source losses, R = C2 (I - W)^T (I - W) for the
/// source reconstruction matrix W, Gamma's column i = theta x_i^s / n1 and
/// vartheta the projected target mean.
struct WeightStepProblem {
  Vector tau;         // n1
  Matrix recon_quad;  // n1 x n1
  Matrix gamma;       // r x n1
  Vector vartheta;    // r
  double c3 = 0.0;
  double delta = 1.0;
  Index n1 = 0;
};

WeightStepProblem build_weight_problem(const ModelState& state, const DatasetPair& pair,
                                       const NeighborGraph& source_graph, const Hyperparams& hp);

/// Full value of the subproblem objective, constant C3/2 |vartheta|^2 included.
double weight_objective(const WeightStepProblem& p, const Vector& pi);

/// The problem in solver form: H = 2 R + C3 Gamma^T Gamma,
/// c = tau - C3 Gamma^T vartheta, box [0, delta], sum n1. The constant term is
/// dropped.
QpProblem to_qp(const WeightStepProblem& p);

/// Solves the subproblem, warm-started from the uniform weights.
Vector update_pi(const WeightStepProblem& p);
/// Solves the subproblem, warm-started from previous.
Vector update_pi(const WeightStepProblem& p, const Vector& previous);

}  // namespace sspsc
