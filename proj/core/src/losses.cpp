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

#include <algorithm>
#include <cmath>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

void check_args(int y, double f) {
  if (y != 1 && y != -1) throw ValidationError("label outside {+1,−1}");
  if (!std::isfinite(f)) throw NumericError("loss evaluated at a non-finite response");
}

// 1 / (1 + exp(-z)) without overflow for either sign of z.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kHinge:
      return "hinge";
    case LossKind::kLogistic:
      return "logistic";
    case LossKind::kExponential:
      return "exponential";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "hinge") return LossKind::kHinge;
  if (name == "logistic") return LossKind::kLogistic;
  if (name == "exponential") return LossKind::kExponential;
  throw ValidationError("unknown loss '" + std::string(name) +
                        "' (expected hinge, logistic or exponential)");
}

double loss_value(LossKind kind, int y, double f) {
  check_args(y, f);
  const double margin = y * f;
  switch (kind) {
    case LossKind::kHinge:
      return std::max(0.0, 1.0 - margin);
    case LossKind::kLogistic: {
      // ln(1 + e^z), z = -margin
      const double z = -margin;
      return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    }
    case LossKind::kExponential:
      return std::exp(-margin);
  }
  return 0.0;
}

double loss_subgradient(LossKind kind, int y, double f) {
  check_args(y, f);
  const double margin = y * f;
  switch (kind) {
    case LossKind::kHinge:
      return margin < 1.0 ? -static_cast<double>(y) : 0.0;
    case LossKind::kLogistic:
      return -y * sigmoid(-margin);
    case LossKind::kExponential:
      return -y * std::exp(-margin);
  }
  return 0.0;
}

}  // namespace sspsc
