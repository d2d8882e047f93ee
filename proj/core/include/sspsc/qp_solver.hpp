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

/// minimize 1/2 x^T H x + c^T x  s.t.  lower <= x <= upper,  sum(x) = eq_sum.
///
/// H must be symmetric positive semidefinite. Both the source-weight step and
/// the local reconstruction coefficients have exactly this shape (box plus one
/// sum constraint), so one kernel serves both.
struct QpProblem {
  Matrix hessian;
  Vector linear;
  Vector lower;
  Vector upper;
  double eq_sum = 0.0;

  Index size() const { return linear.size(); }
};

double qp_objective(const QpProblem& p, const Vector& x);

/// Max-norm KKT stationarity residual of a feasible x: the smallest, over the
/// equality multiplier, of the largest sign violation of the bound multipliers
/// implied by the gradient Hx + c.
double qp_kkt_residual(const QpProblem& p, const Vector& x);

/// Euclidean projection of x onto {lower <= x <= upper, sum(x) = eq_sum}.
Vector project_feasible(const Vector& lower, const Vector& upper, double eq_sum,
                        const Vector& x);

struct QpInfo {
  int active_set_steps = 0;
  int proximal_rounds = 0;
  double kkt_residual = 0.0;
};

/// Solves p starting from the projection of (eq_sum / n) * 1.
///
/// Proximal-point outer loop over a primal active-set method: each round
/// solves the strictly convex problem with H + eps*I anchored at the current
/// iterate, then tries to finish exactly on the identified face. Returns a
/// feasible point with stationarity residual <= 1e-6 (normally far below).
///
/// Throws ValidationError on malformed or infeasible problems, NumericError
/// when H has an eigenvalue below -1e-8 (relative to its scale) or the step
/// budget of 100*n active-set steps is exhausted.
Vector solve_qp(const QpProblem& p, QpInfo* info = nullptr);

/// Same, warm-started from x0 (projected onto the feasible set first). The
/// returned objective never exceeds that of the projected start.
Vector solve_qp(const QpProblem& p, const Vector& x0, QpInfo* info = nullptr);

}  // namespace sspsc
