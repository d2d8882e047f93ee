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

#include <functional>
#include <vector>

#include "sspsc/classifier.hpp"
#include "sspsc/data_model.hpp"
#include "sspsc/neighborhood.hpp"

namespace sspsc {

enum class StopReason { kConverged, kMaxIters };

std::string_view to_string(StopReason reason);

/// One outer iteration. Objectives are the full joint objective at each block
/// boundary; the subspace block covers theta and w together.
struct IterationRecord {
  int iteration = 0;
  double objective_before = 0.0;
  double objective_after_subspace = 0.0;
  double objective_after_classifier = 0.0;
  double objective = 0.0;  // after the weight step
  double matching = 0.0;   // C3/2 |mu_s^pi - mu_t|^2 at the end of the iteration
  double q_value = 0.0;    // classifier block objective after its update
  int classifier_steps = 0;
  int qp_steps = 0;
  double pi_min = 1.0;
  double pi_max = 1.0;
  // Weight subproblem objective (same theta, phi) at pi = 1 and at the solution.
  double weight_objective_uniform = 0.0;
  double weight_objective = 0.0;
  StateDiagnostics diagnostics;
};

struct TrainingTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;
  StopReason stop_reason = StopReason::kMaxIters;

  int iterations_run() const { return static_cast<int>(iterations.size()); }
};

/// The joint objective: weighted source losses + labeled target losses
/// + C1/2 (|u|^2 + |v|^2) + C2 (source weight reconstruction + target response
/// reconstruction) + C3/2 |mu_s^pi - mu_t|^2, with u, v derived from phi,
/// varphi, theta, w.
double full_objective(const ModelState& state, const DatasetPair& pair,
                      const NeighborGraph& source_graph, const NeighborGraph& target_graph,
                      const Hyperparams& hp);

enum class Block { kSubspace, kClassifier, kWeights };

/// Called after every block update with the 1-based outer iteration.
using BlockObserver = std::function<void(int iteration, Block block, const ModelState& state)>;

/// Block-coordinate minimizer over one dataset. Builds both neighbor graphs on
/// construction and holds them fixed. Keeps references to pair; it must
/// outlive the trainer.
class Trainer {
 public:
  Trainer(const DatasetPair& pair, const Hyperparams& hp);

  /// theta = [I_r 0], w = 0, phi = varphi = 0, pi = 1.
  ModelState initial_state() const;

  double objective(const ModelState& state) const;

  /// theta from the eigen-step, then w in closed form.
  void step_subspace(ModelState& state) const;
  /// Backtracked descent on (phi, varphi). Returns the descent record.
  ClassifierBlock::Descent step_classifier(ModelState& state) const;
  /// Source weights from the quadratic program, warm-started at the current pi.
  /// Fills the weight-objective fields of record when given.
  int step_weights(ModelState& state, IterationRecord* record = nullptr) const;

  /// One full cycle in the order subspace, classifier, weights.
  IterationRecord iterate(ModelState& state, int iteration, const BlockObserver& observer = {}) const;

  const NeighborGraph& source_graph() const { return source_graph_; }
  const NeighborGraph& target_graph() const { return target_graph_; }
  const Hyperparams& hyperparams() const { return hp_; }

 private:
  const DatasetPair& pair_;
  Hyperparams hp_;
  int r_;
  NeighborGraph source_graph_;
  NeighborGraph target_graph_;
  ClassifierBlock classifier_;
};

struct FitResult {
  ModelState model;
  TrainingTrace trace;
};

/// Validates, then alternates the three blocks until the relative objective
/// change drops to tol or max_outer_iters is reached.
FitResult fit(const DatasetPair& pair, const Hyperparams& hp, const BlockObserver& observer = {});

}  // namespace sspsc
