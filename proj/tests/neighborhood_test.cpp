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
#include "sspsc/neighborhood.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "sspsc/errors.hpp"
#include "test_support.hpp"

namespace sspsc {
namespace {

using testing::random_matrix;

// All-pairs distance sort, written independently of build_knn.
std::vector<std::vector<int>> brute_force_knn(const Matrix& x, int k) {
  std::vector<std::vector<int>> out;
  for (Index i = 0; i < x.rows(); ++i) {
    std::vector<std::pair<double, int>> all;
    for (Index j = 0; j < x.rows(); ++j) {
      if (j == i) continue;
      double d = 0.0;
      for (Index c = 0; c < x.cols(); ++c) d += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      all.emplace_back(std::sqrt(d), static_cast<int>(j));
    }
    std::sort(all.begin(), all.end());
    std::vector<int> row;
    for (int c = 0; c < k; ++c) row.push_back(all[c].second);
    out.push_back(row);
  }
  return out;
}

double grid_reconstruction_min(const Vector& x, const Matrix& neighbors, double step) {
  const auto f = [&](const Vector& w) { return reconstruction_error(x, neighbors, w); };
  return testing::simplex_grid_min(f, neighbors.rows(), 1.0, 1.0, step);
}

void expect_on_simplex(const Matrix& coeffs) {
  for (Index i = 0; i < coeffs.rows(); ++i) {
    EXPECT_GE(coeffs.row(i).minCoeff(), -1e-12);
    EXPECT_NEAR(coeffs.row(i).sum(), 1.0, 1e-8);
  }
}

TEST(BuildKnn, PointsOnALine) {
  const Matrix x{{0.0}, {1.0}, {10.0}};
  const Eigen::MatrixXi nn = build_knn(x, 1);
  EXPECT_EQ(nn(0, 0), 1);
  EXPECT_EQ(nn(1, 0), 0);
  EXPECT_EQ(nn(2, 0), 1);
}

TEST(BuildKnn, ExhaustiveNeighborhood) {
  std::mt19937_64 rng(1);
  const Matrix x = random_matrix(6, 2, rng);
  const Eigen::MatrixXi nn = build_knn(x, 5);
  for (Index i = 0; i < 6; ++i) {
    std::set<int> got;
    for (Index c = 0; c < 5; ++c) got.insert(nn(i, c));
    EXPECT_EQ(got.size(), 5u);
    EXPECT_EQ(got.count(static_cast<int>(i)), 0u);
  }
}

TEST(BuildKnn, MatchesBruteForceOracle) {
  std::mt19937_64 rng(20);
  const Matrix x = random_matrix(20, 3, rng);
  const Eigen::MatrixXi nn = build_knn(x, 4);
  const auto oracle = brute_force_knn(x, 4);
  for (Index i = 0; i < 20; ++i) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(nn(i, c), oracle[i][c]) << "point " << i;
  }
}

TEST(BuildKnn, TiesGoToSmallerIndex) {
  const Matrix x{{0.0}, {1.0}, {-1.0}, {1.0}};
  const Eigen::MatrixXi nn = build_knn(x, 2);
  EXPECT_EQ(nn(0, 0), 1);
  EXPECT_EQ(nn(0, 1), 2);
  EXPECT_EQ(nn(1, 0), 3);  // duplicate at distance 0
  EXPECT_EQ(nn(1, 1), 0);
}

TEST(BuildKnn, PermutationEquivariant) {
  std::mt19937_64 rng(8);
  const Index n = 25;
  const Matrix x = random_matrix(n, 3, rng);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix permuted(n, 3);
  for (Index i = 0; i < n; ++i) permuted.row(perm[i]) = x.row(i);  // point i is now perm[i]
  const Eigen::MatrixXi a = build_knn(x, 4);
  const Eigen::MatrixXi b = build_knn(permuted, 4);
  for (Index i = 0; i < n; ++i) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(perm[a(i, c)], b(perm[i], c));
  }
}

TEST(BuildKnn, RejectsBadNeighborCounts) {
  const Matrix x = Matrix::Zero(3, 2);
  EXPECT_THROW(build_knn(x, 3), ValidationError);
  EXPECT_THROW(build_knn(x, 0), ValidationError);
}

TEST(SolveReconstruction, SingleIdenticalNeighbor) {
  const Vector x{{1.0, 2.0}};
  const Vector w = solve_reconstruction(x, Matrix{{1.0, 2.0}});
  ASSERT_EQ(w.size(), 1);
  EXPECT_DOUBLE_EQ(w(0), 1.0);
  EXPECT_NEAR(reconstruction_error(x, Matrix{{1.0, 2.0}}, w), 0.0, 1e-20);
}

TEST(SolveReconstruction, SymmetricMidpoint) {
  const Vector x{{1.0, 1.0}};
  const Matrix nb{{0.0, 2.0}, {2.0, 0.0}};
  const Vector w = solve_reconstruction(x, nb);
  EXPECT_NEAR(w(0), 0.5, 1e-9);
  EXPECT_NEAR(w(1), 0.5, 1e-9);
}

TEST(SolveReconstruction, BeatsSimplexGridSearch) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const Vector x = testing::random_vector(2, rng);
    const Matrix nb = random_matrix(3, 2, rng);
    const Vector w = solve_reconstruction(x, nb);
    EXPECT_GE(w.minCoeff(), -1e-12);
    EXPECT_NEAR(w.sum(), 1.0, 1e-8);
    EXPECT_LE(reconstruction_error(x, nb, w), grid_reconstruction_min(x, nb, 1e-3) + 1e-6);
  }
}

TEST(SolveReconstruction, RejectsNonFiniteInput) {
  EXPECT_THROW(solve_reconstruction(Vector{{NAN, 0.0}}, Matrix{{0.0, 1.0}}), ValidationError);
  EXPECT_THROW(solve_reconstruction(Vector{{0.0, 0.0}}, Matrix(0, 2)), ValidationError);
}

TEST(BuildGraph, CollinearMidpoint) {
  const Matrix x{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
  const NeighborGraph g = build_graph(x, 2);
  EXPECT_NEAR(g.coeffs(1, 0), 0.5, 1e-9);
  EXPECT_NEAR(g.coeffs(1, 1), 0.5, 1e-9);
  expect_on_simplex(g.coeffs);
}

TEST(BuildGraph, DuplicatePointsStayOnSimplex) {
  const Matrix x{{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, {3.0, 0.0}};
  const NeighborGraph g = build_graph(x, 2);
  expect_on_simplex(g.coeffs);
  EXPECT_TRUE(g.coeffs.allFinite());
}

TEST(BuildGraph, EveryRowPassesGridOracle) {
  std::mt19937_64 rng(15);
  const Matrix x = random_matrix(15, 3, rng);
  const NeighborGraph g = build_graph(x, 3);
  expect_on_simplex(g.coeffs);
  for (Index i = 0; i < 15; ++i) {
    Matrix nb(3, 3);
    for (int c = 0; c < 3; ++c) {
      EXPECT_NE(g.neighbors(i, c), i);
      nb.row(c) = x.row(g.neighbors(i, c));
    }
    const Vector xi = x.row(i).transpose();
    EXPECT_LE(reconstruction_error(xi, nb, g.coeffs.row(i).transpose()),
              grid_reconstruction_min(xi, nb, 1e-3) + 1e-6);
  }
}

TEST(NeighborGraph, ResidualsAgreeWithDenseWeights) {
  std::mt19937_64 rng(2);
  const Matrix x = random_matrix(12, 2, rng);
  const NeighborGraph g = build_graph(x, 3);
  const Vector values = testing::random_vector(12, rng);
  const Matrix w = g.dense_weights();
  EXPECT_TRUE(g.residuals(values).isApprox(values - w * values, 1e-12));
  EXPECT_TRUE(g.residuals(x).isApprox(x - w * x, 1e-12));
  for (Index i = 0; i < 12; ++i) EXPECT_NEAR(w.row(i).sum(), 1.0, 1e-8);
}

}  // namespace
}  // namespace sspsc
