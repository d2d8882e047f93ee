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

#include <cstdint>

#include "sspsc/data_model.hpp"
#include "sspsc/eval.hpp"

namespace sspsc {

struct SynthConfig {
  std::uint64_t seed = 7;
  Index n1 = 200;
  Index n2 = 200;
  Index n3 = 20;
  Index m = 5;
  double shift = 1.5;    // target translation along the second coordinate
  double rot_deg = 30.0; // target rotation in the plane of the first two coordinates
};

/// Source and target drawn from a balanced two-class Gaussian mixture with
/// class means +/- 2 e_1 and unit covariance; the target sample is rotated by
/// rot_deg in the (e_1, e_2) plane and then shifted by shift * e_2. Rows are
/// shuffled. Labels are kept for every row; pair() truncates the target labels
/// to the first n3.
struct SynthData {
  LabeledSet source;
  LabeledSet target;
  Index n3 = 0;

  DatasetPair pair() const;
};

SynthData generate_synthetic(const SynthConfig& config);

}  // namespace sspsc
