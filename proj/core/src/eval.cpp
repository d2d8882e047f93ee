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
#include "sspsc/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "sspsc/classifier.hpp"
#include "sspsc/errors.hpp"
#include "sspsc/normalize.hpp"

namespace sspsc {
namespace {

Matrix gather_rows(const Matrix& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = x.row(rows[i]);
  return out;
}

bool is_binary(const std::set<int>& classes) {
  return std::all_of(classes.begin(), classes.end(), [](int c) { return c == 1 || c == -1; });
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

FoldAssignment kfold_split(Index n, int folds, std::uint64_t seed) {
  if (folds < 1) throw ValidationError("fold count must be positive");
  if (folds > n) {
    throw ValidationError("fold count " + std::to_string(folds) + " exceeds the " +
                          std::to_string(n) + " available points");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  FoldAssignment out;
  out.folds.resize(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < perm.size(); ++i) out.folds[i % folds].push_back(perm[i]);
  for (auto& f : out.folds) std::sort(f.begin(), f.end());
  return out;
}

std::vector<Index> half_label_mask(const std::vector<Index>& train_indices, std::uint64_t seed,
                                   std::optional<std::size_t> budget) {
  if (train_indices.empty()) throw ValidationError("cannot label an empty training set");
  std::vector<Index> shuffled = train_indices;
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::size_t count = (shuffled.size() + 1) / 2;
  if (budget) count = std::min(count, *budget);
  shuffled.resize(count);
  std::sort(shuffled.begin(), shuffled.end());
  return shuffled;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) {
    throw ValidationError("accuracy needs equally sized, nonempty label lists");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

std::size_t argmax_class(const Vector& scores) {
  if (scores.size() == 0) throw ValidationError("no class scores");
  std::size_t best = 0;
  for (Index i = 1; i < scores.size(); ++i) {
    if (scores(i) > scores(static_cast<Index>(best))) best = static_cast<std::size_t>(i);
  }
  return best;
}

OneVsAllModel::OneVsAllModel(std::vector<int> classes, std::vector<ModelState> models)
    : classes_(std::move(classes)), models_(std::move(models)) {
  if (classes_.size() != models_.size() || classes_.empty()) {
    throw ValidationError("one-vs-all needs one model per class");
  }
}

Vector OneVsAllModel::scores(const Vector& x) const {
  Vector s(static_cast<Index>(models_.size()));
  for (std::size_t c = 0; c < models_.size(); ++c) {
    s(static_cast<Index>(c)) = predict_target(models_[c].varphi, x).score;
  }
  return s;
}

int OneVsAllModel::predict(const Vector& x) const { return classes_[argmax_class(scores(x))]; }

OneVsAllModel one_vs_all(const LabeledSet& source, const LabeledSet& target,
                         const std::vector<int>& classes, const Hyperparams& hp) {
  if (classes.size() < 2) throw ValidationError("one-vs-all needs at least two classes");
  if (static_cast<Index>(source.labels.size()) != source.features.rows()) {
    throw ValidationError("one-vs-all needs a fully labeled source set");
  }
  const std::set<int> known(classes.begin(), classes.end());
  for (const auto* labels : {&source.labels, &target.labels}) {
    for (int y : *labels) {
      if (!known.count(y)) throw ValidationError("label " + std::to_string(y) + " is not a known class");
    }
  }

  std::vector<ModelState> models;
  for (int cls : classes) {
    DatasetPair pair;
    pair.source_features = source.features;
    pair.target_features = target.features;
    bool positive = false;
    for (int y : source.labels) {
      pair.source_labels.push_back(y == cls ? 1 : -1);
      positive = positive || y == cls;
    }
    if (!positive) {
      throw ValidationError("degenerate one-vs-all class " + std::to_string(cls) +
                            ": no positive source examples");
    }
    for (int y : target.labels) pair.target_labels.push_back(y == cls ? 1 : -1);
    models.push_back(fit(pair, hp).model);
  }
  return OneVsAllModel(classes, std::move(models));
}

std::vector<CvFoldPlan> plan_folds(Index n, const CvOptions& options) {
  if (options.folds < 2) throw ValidationError("cross-validation needs at least two folds");
  const FoldAssignment assignment = kfold_split(n, options.folds, options.seed);
  std::vector<CvFoldPlan> plan;
  for (std::size_t f = 0; f < assignment.folds.size(); ++f) {
    CvFoldPlan fold;
    fold.test = assignment.folds[f];
    for (std::size_t g = 0; g < assignment.folds.size(); ++g) {
      if (g != f) fold.train.insert(fold.train.end(), assignment.folds[g].begin(), assignment.folds[g].end());
    }
    std::sort(fold.train.begin(), fold.train.end());
    fold.labeled = half_label_mask(fold.train, derive_seed(options.seed, f + 1), options.label_budget);
    plan.push_back(std::move(fold));
  }
  return plan;
}

CvReport run_cv(const LabeledSet& source, const LabeledSet& target, const Hyperparams& hp,
                const CvOptions& options) {
  const Index n = target.features.rows();
  if (static_cast<Index>(target.labels.size()) != n) {
    throw ValidationError("cross-validation needs every target row labeled");
  }
  if (static_cast<Index>(source.labels.size()) != source.features.rows()) {
    throw ValidationError("cross-validation needs every source row labeled");
  }
  std::set<int> class_set(source.labels.begin(), source.labels.end());
  class_set.insert(target.labels.begin(), target.labels.end());
  const bool binary = is_binary(class_set);
  const std::vector<int> classes(class_set.begin(), class_set.end());

  CvReport report;
  report.seed = options.seed;
  report.assignment = kfold_split(n, options.folds, options.seed);
  report.plan = plan_folds(n, options);
  report.strategy = binary ? "binary" : "one-vs-all (separate models)";

  for (const CvFoldPlan& fold : report.plan) {
    const auto start = std::chrono::steady_clock::now();

    // Labeled rows first so the labeled target points form a prefix.
    std::vector<Index> order = fold.labeled;
    std::set_difference(fold.train.begin(), fold.train.end(), fold.labeled.begin(),
                        fold.labeled.end(), std::back_inserter(order));
    Matrix source_x = source.features;
    Matrix train_x = gather_rows(target.features, order);
    Matrix test_x = gather_rows(target.features, fold.test);
    if (options.normalize) {
      const Normalizer norm = Normalizer::fit(source_x, train_x);
      source_x = norm.apply(source_x);
      train_x = norm.apply(train_x);
      test_x = norm.apply(test_x);
    }
    std::vector<int> train_labels;
    for (Index idx : fold.labeled) train_labels.push_back(target.labels[idx]);

    std::vector<int> predicted;
    std::vector<int> truth;
    if (binary) {
      DatasetPair pair{source_x, source.labels, train_x, train_labels};
      const FitResult result = fit(pair, hp);
      for (Index r = 0; r < test_x.rows(); ++r) {
        predicted.push_back(predict_target(result.model.varphi, test_x.row(r).transpose()).label);
      }
    } else {
      const OneVsAllModel model =
          one_vs_all(LabeledSet{source_x, source.labels}, LabeledSet{train_x, train_labels}, classes, hp);
      for (Index r = 0; r < test_x.rows(); ++r) predicted.push_back(model.predict(test_x.row(r).transpose()));
    }
    for (Index idx : fold.test) truth.push_back(target.labels[idx]);

    report.fold_accuracy.push_back(accuracy(predicted, truth));
    report.fold_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }

  const double k = static_cast<double>(report.fold_accuracy.size());
  report.mean = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) / k;
  double ss = 0.0;
  for (double a : report.fold_accuracy) ss += (a - report.mean) * (a - report.mean);
  report.stddev = k > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
  return report;
}

}  // namespace sspsc
