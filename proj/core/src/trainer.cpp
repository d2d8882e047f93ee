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
#include "sspsc/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "sspsc/errors.hpp"
#include "sspsc/losses.hpp"
#include "sspsc/subspace.hpp"
#include "sspsc/weights.hpp"

namespace sspsc {

std::string_view to_string(StopReason reason) {
  return reason == StopReason::kConverged ? "converged" : "max_iters";
}

double full_objective(const ModelState& state, const DatasetPair& pair,
                      const NeighborGraph& source_graph, const NeighborGraph& target_graph,
                      const Hyperparams& hp) {
  const Index m = pair.dim();
  if (state.theta.cols() != m || state.phi.size() != m || state.varphi.size() != m ||
      state.pi.size() != pair.n1() || state.w.size() != state.theta.rows()) {
    throw ValidationError("dimension mismatch between model and data");
  }
  if (source_graph.size() != pair.n1() || target_graph.size() != pair.n2()) {
    throw ValidationError("dimension mismatch: graphs do not cover the data");
  }

  const Vector fs = pair.source_features * state.phi;
  const Vector ft = pair.target_features * state.varphi;
  double loss = 0.0;
  for (Index i = 0; i < pair.n1(); ++i) {
    loss += loss_value(hp.loss, pair.source_labels[i], fs(i)) * state.pi(i);
  }
  for (Index j = 0; j < pair.n3(); ++j) loss += loss_value(hp.loss, pair.target_labels[j], ft(j));

  const auto [u, v] = recover_u_v(state.theta, state.w, state.phi, state.varphi);
  const double adaptation = 0.5 * hp.c1 * (u.squaredNorm() + v.squaredNorm());
  const double reconstruction =
      hp.c2 * (source_graph.residuals(state.pi).squaredNorm() + target_graph.residuals(ft).squaredNorm());
  const MeanEmbeddings means = projected_means(state.theta, pair, state.pi);
  const double matching = 0.5 * hp.c3 * (means.mu_s_pi - means.mu_t).squaredNorm();
  return loss + adaptation + reconstruction + matching;
}

Trainer::Trainer(const DatasetPair& pair, const Hyperparams& hp)
    : pair_(pair),
      hp_(hp),
      r_((validate(pair, hp), hp.resolved_subspace_dim(pair.dim()))),
      source_graph_(build_graph(pair.source_features, hp.neighbors)),
      target_graph_(build_graph(pair.target_features, hp.neighbors)),
      classifier_(pair, target_graph_, hp) {}

ModelState Trainer::initial_state() const {
  const Index m = pair_.dim();
  ModelState s;
  s.theta = Matrix::Identity(r_, m);
  s.w = Vector::Zero(r_);
  s.phi = Vector::Zero(m);
  s.varphi = Vector::Zero(m);
  s.pi = Vector::Ones(pair_.n1());
  s.loss = hp_.loss;
  s.recompute_adaptation();
  return s;
}

double Trainer::objective(const ModelState& state) const {
  return full_objective(state, pair_, source_graph_, target_graph_, hp_);
}

void Trainer::step_subspace(ModelState& state) const {
  const Matrix phi_mat = build_phi(state.phi, state.varphi, state.pi, pair_, hp_);
  state.theta = update_theta(phi_mat, r_, state.theta, hp_.theta_selection);
  state.w = hp_.shared_classifier ? update_w(state.theta, state.phi, state.varphi)
                                  : Vector::Zero(r_);
  state.recompute_adaptation();
}

ClassifierBlock::Descent Trainer::step_classifier(ModelState& state) const {
  auto descent =
      classifier_.descend(state.phi, state.varphi, state.theta.transpose() * state.w, state.pi);
  state.phi = descent.phi;
  state.varphi = descent.varphi;
  state.recompute_adaptation();
  return descent;
}

int Trainer::step_weights(ModelState& state, IterationRecord* record) const {
  if (hp_.freeze_weights) {
    if (record) {
      const WeightStepProblem p = build_weight_problem(state, pair_, source_graph_, hp_);
      record->weight_objective_uniform = weight_objective(p, Vector::Ones(pair_.n1()));
      record->weight_objective = weight_objective(p, state.pi);
    }
    return 0;
  }
  const WeightStepProblem p = build_weight_problem(state, pair_, source_graph_, hp_);
  QpInfo info;
  state.pi = solve_qp(to_qp(p), state.pi, &info);
  if (record) {
    record->weight_objective_uniform = weight_objective(p, Vector::Ones(pair_.n1()));
    record->weight_objective = weight_objective(p, state.pi);
  }
  return info.active_set_steps;
}

IterationRecord Trainer::iterate(ModelState& state, int iteration, const BlockObserver& observer) const {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.objective_before = objective(state);

  step_subspace(state);
  rec.objective_after_subspace = objective(state);
  if (observer) observer(iteration, Block::kSubspace, state);

  const auto descent = step_classifier(state);
  rec.classifier_steps = descent.accepted_steps;
  rec.q_value = descent.q_trace.back();
  rec.objective_after_classifier = objective(state);
  if (observer) observer(iteration, Block::kClassifier, state);

  rec.qp_steps = step_weights(state, &rec);
  rec.objective = objective(state);
  if (observer) observer(iteration, Block::kWeights, state);

  const MeanEmbeddings means = projected_means(state.theta, pair_, state.pi);
  rec.matching = 0.5 * hp_.c3 * (means.mu_s_pi - means.mu_t).squaredNorm();
  rec.pi_min = state.pi.minCoeff();
  rec.pi_max = state.pi.maxCoeff();
  rec.diagnostics = diagnose(state, hp_.delta);
  return rec;
}

FitResult fit(const DatasetPair& pair, const Hyperparams& hp, const BlockObserver& observer) {
  const Trainer trainer(pair, hp);
  FitResult result;
  ModelState state = trainer.initial_state();
  double previous = trainer.objective(state);
  result.trace.initial_objective = previous;
  result.trace.stop_reason = StopReason::kMaxIters;

  for (int it = 1; it <= hp.max_outer_iters; ++it) {
    IterationRecord rec = trainer.iterate(state, it, observer);
    const double current = rec.objective;
    result.trace.iterations.push_back(rec);
    if (!std::isfinite(current)) throw NumericError("objective became non-finite");
    if (std::abs(current - previous) <= hp.tol * std::max(1.0, std::abs(previous))) {
      result.trace.stop_reason = StopReason::kConverged;
      break;
    }
    previous = current;
  }
  result.model = std::move(state);
  return result;
}

}  // namespace sspsc
