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
#include "sspsc/classifier.hpp"

#include <cmath>

#include "sspsc/errors.hpp"
#include "sspsc/losses.hpp"

namespace sspsc {
namespace {

constexpr int kMaxHalvings = 20;

void check_vectors(const DatasetPair& pair, const Vector& phi, const Vector& varphi,
                   const Vector& shared, const Vector& pi) {
  const Index m = pair.dim();
  if (phi.size() != m || varphi.size() != m || shared.size() != m || pi.size() != pair.n1()) {
    throw ValidationError("dimension mismatch in classifier block");
  }
}

Prediction predict(const Vector& weights, const Vector& x) {
  if (weights.size() != x.size()) {
    throw ValidationError("dimension mismatch: model has " + std::to_string(weights.size()) +
                          " features, input has " + std::to_string(x.size()));
  }
  Prediction p;
  p.score = weights.dot(x);
  p.label = p.score >= 0.0 ? 1 : -1;
  return p;
}

}  // namespace

ClassifierBlock::ClassifierBlock(const DatasetPair& pair, const NeighborGraph& target_graph,
                                 const Hyperparams& hp)
    : pair_(pair), hp_(hp) {
  if (target_graph.size() != pair.n2()) {
    throw ValidationError("dimension mismatch: target graph does not cover the target set");
  }
  residuals_ = target_graph.residuals(pair.target_features);
  residual_gram_ = residuals_.transpose() * residuals_;
}

double ClassifierBlock::objective(const Vector& phi, const Vector& varphi, const Vector& shared,
                                  const Vector& pi) const {
  check_vectors(pair_, phi, varphi, shared, pi);
  const Vector fs = pair_.source_features * phi;
  double q = 0.0;
  for (Index i = 0; i < pair_.n1(); ++i) {
    q += loss_value(hp_.loss, pair_.source_labels[i], fs(i)) * pi(i);
  }
  for (Index j = 0; j < pair_.n3(); ++j) {
    q += loss_value(hp_.loss, pair_.target_labels[j], pair_.target_features.row(j).dot(varphi));
  }
  q += 0.5 * hp_.c1 * ((phi - shared).squaredNorm() + (varphi - shared).squaredNorm());
  q += hp_.c2 * (residuals_ * varphi).squaredNorm();
  return q;
}

std::pair<Vector, Vector> ClassifierBlock::subgradients(const Vector& phi, const Vector& varphi,
                                                        const Vector& shared,
                                                        const Vector& pi) const {
  check_vectors(pair_, phi, varphi, shared, pi);
  const Vector fs = pair_.source_features * phi;
  Vector source_coeff(pair_.n1());
  for (Index i = 0; i < pair_.n1(); ++i) {
    source_coeff(i) = loss_subgradient(hp_.loss, pair_.source_labels[i], fs(i)) * pi(i);
  }
  Vector grad_phi = pair_.source_features.transpose() * source_coeff + hp_.c1 * (phi - shared);

  Vector grad_varphi = hp_.c1 * (varphi - shared) + 2.0 * hp_.c2 * (residual_gram_ * varphi);
  for (Index j = 0; j < pair_.n3(); ++j) {
    const double f = pair_.target_features.row(j).dot(varphi);
    grad_varphi += loss_subgradient(hp_.loss, pair_.target_labels[j], f) *
                   pair_.target_features.row(j).transpose();
  }
  return {std::move(grad_phi), std::move(grad_varphi)};
}

ClassifierBlock::Descent ClassifierBlock::descend(const Vector& phi, const Vector& varphi,
                                                  const Vector& shared, const Vector& pi) const {
  Descent out{phi, varphi, 0, {}};
  double q = objective(out.phi, out.varphi, shared, pi);
  out.q_trace.push_back(q);
  for (int it = 0; it < hp_.max_inner_iters; ++it) {
    const auto [g_phi, g_varphi] = subgradients(out.phi, out.varphi, shared, pi);
    if (!g_phi.allFinite() || !g_varphi.allFinite()) {
      throw NumericError("non-finite gradient in classifier update");
    }
    if (g_phi.squaredNorm() + g_varphi.squaredNorm() == 0.0) break;

    bool accepted = false;
    double rho = hp_.step;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, rho *= 0.5) {
      Vector next_phi = out.phi - rho * g_phi;
      Vector next_varphi = out.varphi - rho * g_varphi;
      const double next_q = objective(next_phi, next_varphi, shared, pi);
      if (next_q < q) {
        out.phi = std::move(next_phi);
        out.varphi = std::move(next_varphi);
        q = next_q;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++out.accepted_steps;
    out.q_trace.push_back(q);
  }
  return out;
}

double q_objective(const Vector& phi, const Vector& varphi, const Matrix& theta, const Vector& w,
                   const Vector& pi, const DatasetPair& pair, const NeighborGraph& target_graph,
                   const Hyperparams& hp) {
  return ClassifierBlock(pair, target_graph, hp).objective(phi, varphi, theta.transpose() * w, pi);
}

std::pair<Vector, Vector> q_subgradients(const Vector& phi, const Vector& varphi,
                                         const Matrix& theta, const Vector& w, const Vector& pi,
                                         const DatasetPair& pair,
                                         const NeighborGraph& target_graph, const Hyperparams& hp) {
  return ClassifierBlock(pair, target_graph, hp).subgradients(phi, varphi, theta.transpose() * w, pi);
}

ClassifierBlock::Descent update_phi_varphi(const ModelState& state, const DatasetPair& pair,
                                           const NeighborGraph& target_graph, const Hyperparams& hp) {
  return ClassifierBlock(pair, target_graph, hp)
      .descend(state.phi, state.varphi, state.theta.transpose() * state.w, state.pi);
}

std::pair<Vector, Vector> recover_u_v(const Matrix& theta, const Vector& w, const Vector& phi,
                                      const Vector& varphi) {
  if (theta.rows() != w.size() || theta.cols() != phi.size() || phi.size() != varphi.size()) {
    throw ValidationError("dimension mismatch in adaptation recovery");
  }
  const Vector shared = theta.transpose() * w;
  return {phi - shared, varphi - shared};
}

Prediction predict_target(const Vector& varphi, const Vector& x) { return predict(varphi, x); }

Prediction predict_source(const Vector& phi, const Vector& x) { return predict(phi, x); }

}  // namespace sspsc
