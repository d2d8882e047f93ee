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
#include "sspsc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

LabeledSet sample_mixture(Index n, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  LabeledSet set;
  set.features.resize(n, m);
  set.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    // The first half of the shuffled slots are positive.
    const int y = order[i] < n / 2 ? 1 : -1;
    set.labels[i] = y;
    for (Index c = 0; c < m; ++c) set.features(i, c) = noise(rng);
    set.features(i, 0) += 2.0 * y;
  }
  return set;
}

}  // namespace

DatasetPair SynthData::pair() const {
  DatasetPair p;
  p.source_features = source.features;
  p.source_labels = source.labels;
  p.target_features = target.features;
  p.target_labels.assign(target.labels.begin(), target.labels.begin() + n3);
  return p;
}

SynthData generate_synthetic(const SynthConfig& config) {
  if (config.n1 < 1 || config.n2 < 1) throw ValidationError("synthetic sets must be nonempty");
  if (config.n3 < 0 || config.n3 > config.n2) throw ValidationError("n3 must lie in [0, n2]");
  if (config.m < 2) throw ValidationError("synthetic data needs m >= 2");
  if (!std::isfinite(config.shift) || !std::isfinite(config.rot_deg)) {
    throw ValidationError("shift and rotation must be finite");
  }

  std::mt19937_64 rng(config.seed);
  SynthData data;
  data.n3 = config.n3;
  data.source = sample_mixture(config.n1, config.m, rng);
  data.target = sample_mixture(config.n2, config.m, rng);

  const double angle = config.rot_deg * std::numbers::pi / 180.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (Index i = 0; i < config.n2; ++i) {
    const double x0 = data.target.features(i, 0);
    const double x1 = data.target.features(i, 1);
    data.target.features(i, 0) = c * x0 - s * x1;
    data.target.features(i, 1) = s * x0 + c * x1 + config.shift;
  }
  return data;
}

}  // namespace sspsc
