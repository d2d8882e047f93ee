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
#include "sspsc/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

void check_labels(const std::vector<int>& labels, const char* which) {
  for (int y : labels) {
    if (y != 1 && y != -1) {
      throw ValidationError(std::string("label outside {+1,−1} in ") + which + " set");
    }
  }
}

void check_finite(const Matrix& x, const char* which) {
  if (!x.allFinite()) throw ValidationError(std::string("non-finite feature in ") + which + " set");
}

}  // namespace

int Hyperparams::resolved_subspace_dim(Index m) const {
  if (subspace_dim) return *subspace_dim;
  return static_cast<int>(std::min<Index>(10, m - 1));
}

void ModelState::recompute_adaptation() {
  const Vector shared = theta.transpose() * w;
  u = phi - shared;
  v = varphi - shared;
}

void validate_hyperparams(const Hyperparams& hp) {
  if (!(hp.c1 >= 0.0) || !(hp.c2 >= 0.0) || !(hp.c3 >= 0.0)) {
    throw ValidationError("term weights C1, C2, C3 must be nonnegative");
  }
  if (!std::isfinite(hp.c1) || !std::isfinite(hp.c2) || !std::isfinite(hp.c3)) {
    throw ValidationError("term weights C1, C2, C3 must be finite");
  }
  if (!(hp.delta >= 1.0) || !std::isfinite(hp.delta)) {
    throw ValidationError("δ < 1 makes π constraints infeasible");
  }
  if (!(hp.step > 0.0) || !std::isfinite(hp.step)) throw ValidationError("descent step ρ must be positive");
  if (hp.neighbors < 1) throw ValidationError("neighbor count k must be at least 1");
  if (hp.subspace_dim && *hp.subspace_dim < 1) throw ValidationError("subspace dimension r must be at least 1");
  if (hp.max_outer_iters < 1 || hp.max_inner_iters < 1) {
    throw ValidationError("iteration limits must be positive");
  }
  if (!(hp.tol > 0.0)) throw ValidationError("convergence tolerance must be positive");
}

void validate(const DatasetPair& pair, const Hyperparams& hp) {
  const Index m = pair.dim();
  if (pair.n1() < 1 || pair.n2() < 1 || m < 1) {
    throw ValidationError("dimension mismatch: source and target sets must be nonempty");
  }
  if (pair.target_features.cols() != m) {
    throw ValidationError("dimension mismatch: source has " + std::to_string(m) +
                          " features, target has " + std::to_string(pair.target_features.cols()));
  }
  if (static_cast<Index>(pair.source_labels.size()) != pair.n1()) {
    throw ValidationError("dimension mismatch: " + std::to_string(pair.source_labels.size()) +
                          " source labels for " + std::to_string(pair.n1()) + " source rows");
  }
  if (pair.n3() > pair.n2()) {
    throw ValidationError("dimension mismatch: more target labels than target rows");
  }
  check_labels(pair.source_labels, "source");
  check_labels(pair.target_labels, "target");
  check_finite(pair.source_features, "source");
  check_finite(pair.target_features, "target");

  validate_hyperparams(hp);
  const int r = hp.resolved_subspace_dim(m);
  if (r < 1 || r >= m) {
    throw ValidationError("subspace dimension r = " + std::to_string(r) +
                          " must satisfy 1 <= r < m = " + std::to_string(m));
  }
  const Index limit = std::min(pair.n1(), pair.n2()) - 1;
  if (hp.neighbors > limit) {
    throw ValidationError("neighbor count k = " + std::to_string(hp.neighbors) +
                          " exceeds min(n1, n2) - 1 = " + std::to_string(limit));
  }
}

StateDiagnostics diagnose(const ModelState& state, double delta) {
  StateDiagnostics d;
  const Index r = state.theta.rows();
  d.orthonormality_error =
      (state.theta * state.theta.transpose() - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
  const double n1 = static_cast<double>(state.pi.size());
  if (state.pi.size() > 0) {
    d.pi_bound_violation = std::max({0.0, -state.pi.minCoeff(), state.pi.maxCoeff() - delta});
  }
  d.pi_sum_error = std::abs(state.pi.sum() - n1);
  const Vector shared = state.theta.transpose() * state.w;
  d.adaptation_error = std::max((state.u - (state.phi - shared)).cwiseAbs().maxCoeff(),
                                (state.v - (state.varphi - shared)).cwiseAbs().maxCoeff());
  return d;
}

void check_model_state(const ModelState& state, double delta) {
  const Index m = state.theta.cols();
  const Index r = state.theta.rows();
  if (r < 1 || m < 1 || state.w.size() != r || state.phi.size() != m ||
      state.varphi.size() != m || state.u.size() != m || state.v.size() != m ||
      state.pi.size() < 1) {
    throw ValidationError("model dimensions are inconsistent");
  }
  if (!state.theta.allFinite() || !state.w.allFinite() || !state.phi.allFinite() ||
      !state.varphi.allFinite() || !state.u.allFinite() || !state.v.allFinite() ||
      !state.pi.allFinite()) {
    throw ValidationError("model contains non-finite values");
  }
  const StateDiagnostics d = diagnose(state, delta);
  if (d.orthonormality_error > 1e-10) throw ValidationError("model theta rows are not orthonormal");
  const double n1 = static_cast<double>(state.pi.size());
  if (d.pi_bound_violation > 1e-8 || d.pi_sum_error > 1e-8 * n1) {
    throw ValidationError("model source weights violate 0 <= π <= δ, Σπ = n1");
  }
  if (d.adaptation_error > 1e-10) throw ValidationError("model u, v disagree with phi, varphi, theta, w");
}

}  // namespace sspsc
