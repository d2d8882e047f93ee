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
#include <optional>
#include <string>
#include <vector>

#include "sspsc/data_model.hpp"
#include "sspsc/trainer.hpp"

namespace sspsc {

/// Feature rows with integer class labels. For the binary path labels are
/// +1/-1; any other label set goes through one-vs-all. When used as a partially
/// labeled set, labels cover the first labels.size() rows.
struct LabeledSet {
  Matrix features;
  std::vector<int> labels;
};

struct FoldAssignment {
  std::vector<std::vector<Index>> folds;  // each sorted ascending
};

/// Seeded uniform partition of 0..n-1 into folds whose sizes differ by at most 1.
FoldAssignment kfold_split(Index n, int folds, std::uint64_t seed);

/// Seeded random subset of train_indices of size ceil(count / 2), capped at
/// budget when given; returned in ascending order.
std::vector<Index> half_label_mask(const std::vector<Index>& train_indices, std::uint64_t seed,
                                   std::optional<std::size_t> budget = std::nullopt);

/// Mixes a base seed with a stream number into an independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Index into classes of the largest score; ties go to the lowest index.
std::size_t argmax_class(const Vector& scores);

/// One independently trained binary model per class (class vs rest).
class OneVsAllModel {
 public:
  OneVsAllModel(std::vector<int> classes, std::vector<ModelState> models);

  const std::vector<int>& classes() const { return classes_; }
  const std::vector<ModelState>& models() const { return models_; }

  Vector scores(const Vector& x) const;
  int predict(const Vector& x) const;

 private:
  std::vector<int> classes_;
  std::vector<ModelState> models_;
};

/// Trains one full model per class. The source must be fully labeled; the
/// target labels cover a prefix. Throws ValidationError for a class without a
/// positive source example ("degenerate one-vs-all class") or for labels not in
/// classes.
OneVsAllModel one_vs_all(const LabeledSet& source, const LabeledSet& target,
                         const std::vector<int>& classes, const Hyperparams& hp);

struct CvOptions {
  int folds = 10;
  std::uint64_t seed = 0;
  /// Upper limit on labeled target points per training fold.
  std::optional<std::size_t> label_budget;
  /// z-score features using source + training-fold target statistics.
  bool normalize = false;
};

struct CvFoldPlan {
  std::vector<Index> test;
  std::vector<Index> train;
  std::vector<Index> labeled;  // subset of train
};

/// Fold layout used by run_cv, exposed for auditing.
std::vector<CvFoldPlan> plan_folds(Index n, const CvOptions& options);

struct CvReport {
  std::vector<double> fold_accuracy;
  std::vector<double> fold_seconds;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over folds
  std::uint64_t seed = 0;
  FoldAssignment assignment;
  std::vector<CvFoldPlan> plan;
  std::string strategy;  // "binary" or "one-vs-all (separate models)"
};

/// Cross-validation over the target set: each fold is held out in turn, the
/// rest is half labeled (labeled rows placed first) and combined with the
/// full source set for training; accuracy is measured on the held-out fold
/// with the target classifier. Target labels must be complete.
CvReport run_cv(const LabeledSet& source, const LabeledSet& target, const Hyperparams& hp,
                const CvOptions& options);

}  // namespace sspsc
