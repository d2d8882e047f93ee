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
#include "sspsc/losses.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

constexpr LossKind kAll[] = {LossKind::kHinge, LossKind::kLogistic, LossKind::kExponential};

TEST(LossValue, KnownPoints) {
  EXPECT_DOUBLE_EQ(loss_value(LossKind::kHinge, 1, 0.0), 1.0);
  EXPECT_NEAR(loss_value(LossKind::kLogistic, 1, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_value(LossKind::kLogistic, 1, 0.0), 0.693147, 1e-6);
  EXPECT_DOUBLE_EQ(loss_value(LossKind::kExponential, -1, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(loss_value(LossKind::kHinge, 1, 2.0), 0.0);
}

TEST(LossSubgradient, KnownPoints) {
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kHinge, 1, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kLogistic, 1, 0.0), -0.5);
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kHinge, 1, 1.0), 0.0);  // kink
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kHinge, -1, 0.5), 1.0);
}

TEST(LossSubgradient, LogisticMatchesFiniteDifferenceAtPoint3) {
  const double h = 1e-6;
  const double fd = (loss_value(LossKind::kLogistic, 1, 0.3 + h) - loss_value(LossKind::kLogistic, 1, 0.3 - h)) / (2 * h);
  const double g = loss_subgradient(LossKind::kLogistic, 1, 0.3);
  EXPECT_LE(std::abs(g - fd), 1e-6 * std::abs(g));
}

TEST(LossSubgradient, SmoothLossesMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f_dist(-10.0, 10.0);
  std::bernoulli_distribution coin(0.5);
  const double h = 1e-6;
  for (LossKind kind : {LossKind::kLogistic, LossKind::kExponential}) {
    for (int t = 0; t < 100; ++t) {
      const int y = coin(rng) ? 1 : -1;
      const double f = f_dist(rng);
      const double g = loss_subgradient(kind, y, f);
      const double fd = (loss_value(kind, y, f + h) - loss_value(kind, y, f - h)) / (2 * h);
      EXPECT_LE(std::abs(g - fd), 1e-5 * std::max(1.0, std::abs(g))) << to_string(kind) << " y=" << y << " f=" << f;
    }
  }
}

TEST(LossValue, ConvexAlongSegments) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> f_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> t_dist(0.0, 1.0);
  for (LossKind kind : kAll) {
    for (int y : {1, -1}) {
      for (int i = 0; i < 200; ++i) {
        const double a = f_dist(rng);
        const double b = f_dist(rng);
        const double t = t_dist(rng);
        const double lhs = loss_value(kind, y, t * a + (1 - t) * b);
        const double rhs = t * loss_value(kind, y, a) + (1 - t) * loss_value(kind, y, b);
        EXPECT_LE(lhs, rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST(LossValue, NonnegativeAndHingeZeroExactlyBeyondMargin) {
  for (LossKind kind : kAll) {
    for (double f = -5.0; f <= 5.0; f += 0.25) {
      EXPECT_GE(loss_value(kind, 1, f), 0.0);
      EXPECT_GE(loss_value(kind, -1, f), 0.0);
    }
  }
  for (double margin = -2.0; margin <= 3.0; margin += 0.125) {
    EXPECT_EQ(loss_value(LossKind::kHinge, 1, margin) == 0.0, margin >= 1.0);
    EXPECT_EQ(loss_value(LossKind::kHinge, -1, -margin) == 0.0, margin >= 1.0);
  }
}

TEST(LossValue, LogisticIsStableForLargeResponses) {
  EXPECT_NEAR(loss_value(LossKind::kLogistic, 1, -800.0), 800.0, 1e-9);
  EXPECT_NEAR(loss_value(LossKind::kLogistic, 1, 800.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kLogistic, 1, -800.0), -1.0);
  EXPECT_DOUBLE_EQ(loss_subgradient(LossKind::kLogistic, -1, -800.0), 0.0);
  EXPECT_TRUE(std::isfinite(loss_subgradient(LossKind::kLogistic, 1, 40.0)));
}

TEST(Losses, RejectNonFiniteResponseAndBadLabels) {
  EXPECT_THROW(loss_value(LossKind::kHinge, 1, NAN), NumericError);
  EXPECT_THROW(loss_subgradient(LossKind::kLogistic, 1, INFINITY), NumericError);
  EXPECT_THROW(loss_value(LossKind::kHinge, 0, 1.0), ValidationError);
}

TEST(LossKindNames, RoundTrip) {
  for (LossKind kind : kAll) EXPECT_EQ(parse_loss_kind(to_string(kind)), kind);
  EXPECT_THROW(parse_loss_kind("squared"), ValidationError);
}

}  // namespace
}  // namespace sspsc
