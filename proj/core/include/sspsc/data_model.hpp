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

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "sspsc/losses.hpp"

namespace sspsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A fully labeled source set and a partially labeled target set sharing one
/// feature space. Target labels belong to the first target_labels.size() rows;
/// the remaining target rows are unlabeled.
struct DatasetPair {
  Matrix source_features;  // n1 x m
  std::vector<int> source_labels;
  Matrix target_features;  // n2 x m
  std::vector<int> target_labels;  // n3 <= n2 entries

  Index dim() const { return source_features.cols(); }
  Index n1() const { return source_features.rows(); }
  Index n2() const { return target_features.rows(); }
  Index n3() const { return static_cast<Index>(target_labels.size()); }
};

/// Which end of the spectrum the subspace step keeps. kSmallest minimizes the
/// trace objective; kLargest keeps the top eigenvectors instead.
enum class ThetaSelection { kSmallest, kLargest };

struct Hyperparams {
  double c1 = 10.0;  // adaptation regularizer weight
  double c2 = 1.0;   // neighborhood reconstruction weight
  double c3 = 100.0; // distribution matching weight
  /// Subspace dimension r; unset means min(10, m - 1).
  std::optional<int> subspace_dim;
  int neighbors = 5;
  double delta = 3.0;  // upper bound on each source weight
  double step = 1e-3;  // descent step for the classifier block
  LossKind loss = LossKind::kLogistic;
  int max_outer_iters = 100;
  int max_inner_iters = 50;
  double tol = 1e-5;
  std::uint64_t seed = 0;
  ThetaSelection theta_selection = ThetaSelection::kSmallest;

  // Ablation switches. With freeze_weights the source weights stay at 1; with
  // shared_classifier off, w stays 0 and the two domain classifiers decouple.
  bool freeze_weights = false;
  bool shared_classifier = true;

  int resolved_subspace_dim(Index m) const;
};

/// All learned parameters. u and v are derived: u = phi - theta^T w,
/// v = varphi - theta^T w.
struct ModelState {
  Matrix theta;   // r x m, orthonormal rows
  Vector w;       // r
  Vector phi;     // m, source classifier
  Vector varphi;  // m, target classifier
  Vector u;       // m
  Vector v;       // m
  Vector pi;      // n1, source weights
  LossKind loss = LossKind::kLogistic;

  void recompute_adaptation();
};

/// Throws ValidationError naming the first violated condition.
void validate(const DatasetPair& pair, const Hyperparams& hp);

/// Hyperparameter-only checks (no data).
void validate_hyperparams(const Hyperparams& hp);

/// Largest deviations of a state from its invariants.
struct StateDiagnostics {
  double orthonormality_error = 0.0;  // max |theta theta^T - I|
  double pi_bound_violation = 0.0;    // max(0, -pi_i, pi_i - delta)
  double pi_sum_error = 0.0;          // |sum pi - n1|
  double adaptation_error = 0.0;      // max |u - (phi - theta^T w)|, same for v
};

StateDiagnostics diagnose(const ModelState& state, double delta);

/// Throws ValidationError if the state violates its invariants (shape,
/// orthonormality 1e-10, weight box and sum 1e-8, adaptation identity 1e-10).
void check_model_state(const ModelState& state, double delta);

}  // namespace sspsc
