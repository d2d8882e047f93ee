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
#include "sspsc/normalize.hpp"

#include <cmath>

#include "sspsc/errors.hpp"

namespace sspsc {

Normalizer Normalizer::fit(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ValidationError("dimension mismatch in normalization");
  Matrix all(a.rows() + b.rows(), a.cols());
  all << a, b;
  Normalizer n;
  n.mean = all.colwise().mean().transpose();
  n.scale.resize(all.cols());
  for (Index c = 0; c < all.cols(); ++c) {
    const double var = (all.col(c).array() - n.mean(c)).square().mean();
    n.scale(c) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return n;
}

Matrix Normalizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) throw ValidationError("dimension mismatch in normalization");
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Vector Normalizer::apply(const Vector& x) const {
  if (x.size() != mean.size()) throw ValidationError("dimension mismatch in normalization");
  return (x - mean).cwiseQuotient(scale);
}

}  // namespace sspsc
