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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "sspsc/errors.hpp"
#include "sspsc/normalize.hpp"

namespace sspsc {
namespace {

int positives(const std::vector<int>& labels) { return static_cast<int>(std::count(labels.begin(), labels.end(), 1)); }

TEST(Synthetic, BalancedClasses) {
  const SynthData d = generate_synthetic(SynthConfig{.n1 = 100, .n2 = 100});
  EXPECT_EQ(positives(d.source.labels), 50);
  EXPECT_EQ(positives(d.target.labels), 50);
  EXPECT_EQ(d.source.features.rows(), 100);
  EXPECT_EQ(d.target.features.cols(), 5);
}

TEST(Synthetic, DeterministicPerSeed) {
  const SynthData a = generate_synthetic(SynthConfig{});
  const SynthData b = generate_synthetic(SynthConfig{});
  EXPECT_EQ(a.source.features, b.source.features);
  EXPECT_EQ(a.target.features, b.target.features);
  EXPECT_EQ(a.target.labels, b.target.labels);
  EXPECT_NE(a.source.features, generate_synthetic(SynthConfig{.seed = 8}).source.features);
}

TEST(Synthetic, NoShiftMeansSameDistribution) {
  const SynthData d = generate_synthetic(SynthConfig{.n1 = 4000, .n2 = 4000, .shift = 0.0, .rot_deg = 0.0});
  EXPECT_NE(d.source.features, d.target.features);
  const Vector gap = d.source.features.colwise().mean() - d.target.features.colwise().mean();
  EXPECT_LE(gap.cwiseAbs().maxCoeff(), 0.15);
}

TEST(Synthetic, ClassMeansAndShift) {
  const SynthData d = generate_synthetic(SynthConfig{.n1 = 4000, .n2 = 4000, .shift = 1.5, .rot_deg = 90.0});
  Vector pos = Vector::Zero(5);
  for (Index i = 0; i < 4000; ++i) {
    if (d.source.labels[i] == 1) pos += d.source.features.row(i).transpose() / 2000.0;
  }
  EXPECT_NEAR(pos(0), 2.0, 0.1);
  EXPECT_NEAR(pos(1), 0.0, 0.1);
  // A quarter turn sends the positive mean to (0, 2), then the shift moves it to (0, 3.5).
  Vector tpos = Vector::Zero(5);
  for (Index j = 0; j < 4000; ++j) {
    if (d.target.labels[j] == 1) tpos += d.target.features.row(j).transpose() / 2000.0;
  }
  EXPECT_NEAR(tpos(0), 0.0, 0.1);
  EXPECT_NEAR(tpos(1), 3.5, 0.1);
}

TEST(Synthetic, PairKeepsLabeledPrefix) {
  const SynthData d = generate_synthetic(SynthConfig{.n3 = 12});
  const DatasetPair pair = d.pair();
  ASSERT_EQ(pair.n3(), 12);
  for (Index j = 0; j < 12; ++j) EXPECT_EQ(pair.target_labels[j], d.target.labels[j]);
}

TEST(Synthetic, RejectsBadCounts) {
  EXPECT_THROW(generate_synthetic(SynthConfig{.m = 1}), ValidationError);
  EXPECT_THROW(generate_synthetic(SynthConfig{.n2 = 10, .n3 = 11}), ValidationError);
}

TEST(Normalizer, ZScoresAgainstCombinedStatistics) {
  const Matrix a{{1.0, 5.0}, {3.0, 5.0}};
  const Matrix b{{5.0, 5.0}, {7.0, 5.0}};
  const Normalizer n = Normalizer::fit(a, b);
  EXPECT_DOUBLE_EQ(n.mean(0), 4.0);
  EXPECT_DOUBLE_EQ(n.scale(0), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(n.scale(1), 1.0);
  const Matrix z = n.apply(a);
  EXPECT_DOUBLE_EQ(z(0, 0), -3.0 / std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(z(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(n.apply(Vector{{4.0, 6.0}})(1), 1.0);
}

}  // namespace
}  // namespace sspsc
