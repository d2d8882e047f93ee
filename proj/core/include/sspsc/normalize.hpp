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

#include "sspsc/data_model.hpp"

namespace sspsc {

/// Per-feature z-scoring. Features with zero spread get scale 1.
struct Normalizer {
  Vector mean;
  Vector scale;

  static Normalizer fit(const Matrix& a, const Matrix& b);
  Matrix apply(const Matrix& x) const;
  Vector apply(const Vector& x) const;
};

}  // namespace sspsc
