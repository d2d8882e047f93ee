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

#include <string>
#include <string_view>

namespace sspsc {

enum class LossKind { kHinge, kLogistic, kExponential };

std::string_view to_string(LossKind kind);
/// Accepts "hinge", "logistic" or "exponential"; throws ValidationError otherwise.
LossKind parse_loss_kind(std::string_view name);

/// L(y, f) for a label y in {+1, -1} and a classifier response f.
double loss_value(LossKind kind, int y, double f);

/// dL/df. The hinge kink (y*f == 1) returns 0.
double loss_subgradient(LossKind kind, int y, double f);

}  // namespace sspsc
