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
#include "sspsc/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sspsc/errors.hpp"

namespace sspsc {
namespace {

enum class Bound : unsigned char { kFree, kLower, kUpper };

constexpr int kMaxProximalRounds = 500;
constexpr double kInf = std::numeric_limits<double>::infinity();

double hessian_scale(const Matrix& h) {
  return h.size() == 0 ? 1.0 : std::max(1.0, h.cwiseAbs().maxCoeff());
}

bool at_lower(double x, double lo, double hi) {
  return x <= lo + 1e-10 * std::max(1.0, hi - lo);
}
bool at_upper(double x, double lo, double hi) {
  return x >= hi - 1e-10 * std::max(1.0, hi - lo);
}

void check_problem(const QpProblem& p) {
  const Index n = p.size();
  if (n < 1) throw ValidationError("QP has no variables");
  if (p.hessian.rows() != n || p.hessian.cols() != n || p.lower.size() != n || p.upper.size() != n) {
    throw ValidationError("QP dimension mismatch");
  }
  if (!p.hessian.allFinite() || !p.linear.allFinite() || !p.lower.allFinite() ||
      !p.upper.allFinite() || !std::isfinite(p.eq_sum)) {
    throw ValidationError("QP data must be finite");
  }
  const double scale = hessian_scale(p.hessian);
  if ((p.hessian - p.hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError("QP Hessian is not symmetric");
  }
  if ((p.upper - p.lower).minCoeff() < 0.0) throw ValidationError("QP lower bound exceeds upper bound");
  const double slack =
      1e-12 * std::max({1.0, std::abs(p.eq_sum), p.lower.cwiseAbs().sum(), p.upper.cwiseAbs().sum()});
  if (p.lower.sum() > p.eq_sum + slack || p.upper.sum() < p.eq_sum - slack) {
    throw ValidationError("QP is infeasible: sum constraint " + std::to_string(p.eq_sum) +
                          " lies outside [" + std::to_string(p.lower.sum()) + ", " +
                          std::to_string(p.upper.sum()) + "]");
  }
}

void check_psd(const Matrix& h) {
  const double tol = 1e-8 * hessian_scale(h);
  Eigen::LLT<Matrix> llt(h + tol * Matrix::Identity(h.rows(), h.cols()));
  if (llt.info() != Eigen::Success) {
    throw NumericError("QP Hessian is not positive semidefinite");
  }
}

// Pushes the residual s - sum(x) into variables with room, interior ones first.
void fix_sum(Vector& x, const Vector& lo, const Vector& hi, double s) {
  for (int pass = 0; pass < 3; ++pass) {
    for (int interior_only = 1; interior_only >= 0; --interior_only) {
      for (Index i = 0; i < x.size(); ++i) {
        const double r = s - x.sum();
        if (r == 0.0) return;
        const bool interior = x(i) > lo(i) && x(i) < hi(i);
        if (interior_only && !interior) continue;
        const double moved = std::clamp(x(i) + r, lo(i), hi(i));
        x(i) = moved;
      }
    }
  }
}

std::vector<Bound> classify(const Vector& x, const Vector& lo, const Vector& hi) {
  std::vector<Bound> status(static_cast<std::size_t>(x.size()), Bound::kFree);
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) <= lo(i)) {
      status[i] = Bound::kLower;
    } else if (x(i) >= hi(i)) {
      status[i] = Bound::kUpper;
    }
  }
  return status;
}

std::vector<Index> free_indices(const std::vector<Bound>& status) {
  std::vector<Index> idx;
  for (std::size_t i = 0; i < status.size(); ++i) {
    if (status[i] == Bound::kFree) idx.push_back(static_cast<Index>(i));
  }
  return idx;
}

// Primal active-set method for the strictly convex problem
// min 1/2 x^T A x + b^T x on the box with sum(x) fixed; x must start feasible.
class ActiveSet {
 public:
  ActiveSet(const Matrix& a, const Vector& b, const Vector& lo, const Vector& hi)
      : a_(a), b_(b), lo_(lo), hi_(hi) {}

  // Returns the number of steps taken; throws once the budget is exceeded.
  int run(Vector& x, std::vector<Bound>& status, int budget) const {
    const Index n = x.size();
    int steps = 0;
    // After an unblocked full step x minimizes over its face; the recomputed
    // step is only rounding noise then.
    bool face_minimum = false;
    for (;;) {
      const Vector g = a_ * x + b_;
      const std::vector<Index> free = free_indices(status);
      const Index nf = static_cast<Index>(free.size());

      Vector p = Vector::Zero(n);
      double nu = 0.0;
      if (nf >= 1) {
        Matrix aff(nf, nf);
        Vector gf(nf);
        for (Index r = 0; r < nf; ++r) {
          gf(r) = g(free[r]);
          for (Index c = 0; c < nf; ++c) aff(r, c) = a_(free[r], free[c]);
        }
        Eigen::LLT<Matrix> llt(aff);
        if (llt.info() != Eigen::Success) throw NumericError("QP subproblem factorization failed");
        const Vector z1 = llt.solve(gf);
        const Vector z2 = llt.solve(Vector::Ones(nf));
        nu = -z1.sum() / z2.sum();
        const Vector pf = -(z1 + nu * z2);
        for (Index r = 0; r < nf; ++r) p(free[r]) = pf(r);
      }

      const double xscale = 1.0 + x.cwiseAbs().maxCoeff();
      if (face_minimum || p.cwiseAbs().maxCoeff() <= 1e-14 * xscale) {
        face_minimum = false;
        const double mtol = 1e-13 * std::max(1.0, g.cwiseAbs().maxCoeff());
        if (nf >= 1) {
          Index worst = -1;
          double worst_violation = mtol;
          for (Index i = 0; i < n; ++i) {
            if (status[i] == Bound::kFree || lo_(i) == hi_(i)) continue;
            const double mult = g(i) + nu;
            const double violation = status[i] == Bound::kLower ? -mult : mult;
            if (violation > worst_violation) {
              worst_violation = violation;
              worst = i;
            }
          }
          if (worst < 0) return steps;
          status[worst] = Bound::kFree;
        } else {
          // Vertex: the cheapest improving move raises one variable at its
          // lower bound and lowers one at its upper bound.
          Index up = -1;
          Index down = -1;
          double best_lower = -kInf;
          double best_upper = kInf;
          for (Index i = 0; i < n; ++i) {
            if (lo_(i) == hi_(i)) continue;
            if (status[i] == Bound::kLower && -g(i) > best_lower) {
              best_lower = -g(i);
              up = i;
            } else if (status[i] == Bound::kUpper && -g(i) < best_upper) {
              best_upper = -g(i);
              down = i;
            }
          }
          if (up < 0 || down < 0 || best_lower <= best_upper + mtol) return steps;
          status[up] = Bound::kFree;
          status[down] = Bound::kFree;
        }
      } else {
        double alpha = 1.0;
        Index blocking = -1;
        Bound blocking_side = Bound::kFree;
        for (Index i = 0; i < n; ++i) {
          if (status[i] != Bound::kFree) continue;
          if (p(i) < 0.0) {
            const double t = (lo_(i) - x(i)) / p(i);
            if (t < alpha) {
              alpha = std::max(t, 0.0);
              blocking = i;
              blocking_side = Bound::kLower;
            }
          } else if (p(i) > 0.0) {
            const double t = (hi_(i) - x(i)) / p(i);
            if (t < alpha) {
              alpha = std::max(t, 0.0);
              blocking = i;
              blocking_side = Bound::kUpper;
            }
          }
        }
        for (Index i = 0; i < n; ++i) {
          if (status[i] == Bound::kFree) x(i) = std::clamp(x(i) + alpha * p(i), lo_(i), hi_(i));
        }
        if (blocking >= 0) {
          x(blocking) = blocking_side == Bound::kLower ? lo_(blocking) : hi_(blocking);
          status[blocking] = blocking_side;
        } else {
          face_minimum = true;
        }
      }
      if (++steps > budget) throw NumericError("QP did not converge");
    }
  }

 private:
  const Matrix& a_;
  const Vector& b_;
  const Vector& lo_;
  const Vector& hi_;
};

// Tries to finish exactly: solve the equality-constrained problem on the face
// given by status with the original Hessian and accept the result if it stays
// inside the box, satisfies KKT and does not increase the objective.
bool polish(const QpProblem& p, const std::vector<Bound>& status, Vector& x) {
  const std::vector<Index> free = free_indices(status);
  const Index nf = static_cast<Index>(free.size());
  if (nf == 0) return false;
  Vector fixed_x = x;
  for (Index i : free) fixed_x(i) = 0.0;

  Matrix kkt = Matrix::Zero(nf + 1, nf + 1);
  Vector rhs(nf + 1);
  const Vector coupling = p.hessian * fixed_x;
  for (Index r = 0; r < nf; ++r) {
    for (Index c = 0; c < nf; ++c) kkt(r, c) = p.hessian(free[r], free[c]);
    kkt(r, nf) = 1.0;
    kkt(nf, r) = 1.0;
    rhs(r) = -p.linear(free[r]) - coupling(free[r]);
  }
  rhs(nf) = p.eq_sum - fixed_x.sum();

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(kkt);
  const Vector sol = cod.solve(rhs);
  const double scale = hessian_scale(p.hessian);
  if (!sol.allFinite() ||
      (kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale * (1.0 + sol.cwiseAbs().maxCoeff())) {
    return false;
  }

  Vector candidate = x;
  for (Index r = 0; r < nf; ++r) {
    const Index i = free[r];
    const double slack = 1e-12 * std::max(1.0, p.upper(i) - p.lower(i));
    if (sol(r) < p.lower(i) - slack || sol(r) > p.upper(i) + slack) return false;
    candidate(i) = std::clamp(sol(r), p.lower(i), p.upper(i));
  }
  fix_sum(candidate, p.lower, p.upper, p.eq_sum);

  const Vector g = p.hessian * candidate + p.linear;
  const double target = 1e-11 * std::max(1.0, g.cwiseAbs().maxCoeff());
  if (qp_kkt_residual(p, candidate) > target) return false;
  const double before = qp_objective(p, x);
  if (qp_objective(p, candidate) > before + 1e-12 * std::max(1.0, std::abs(before))) return false;
  x = candidate;
  return true;
}

Vector solve_from(const QpProblem& p, const Vector& start, QpInfo* info) {
  check_problem(p);
  check_psd(p.hessian);
  const Index n = p.size();
  const double eps = 1e-6 * hessian_scale(p.hessian);
  const Matrix regularized = p.hessian + eps * Matrix::Identity(n, n);
  const int budget = static_cast<int>(100 * n);

  Vector x = project_feasible(p.lower, p.upper, p.eq_sum, start);
  std::vector<Bound> status = classify(x, p.lower, p.upper);

  QpInfo local;
  for (;;) {
    const Vector g = p.hessian * x + p.linear;
    const double target = 1e-11 * std::max(1.0, g.cwiseAbs().maxCoeff());
    if (qp_kkt_residual(p, x) <= target) break;
    if (polish(p, status, x)) break;
    if (local.proximal_rounds >= kMaxProximalRounds) break;

    // min f(x) + eps/2 |x - x_k|^2
    const Vector anchored = p.linear - eps * x;
    const ActiveSet inner(regularized, anchored, p.lower, p.upper);
    const Vector before = x;
    local.active_set_steps += inner.run(x, status, budget - local.active_set_steps);
    ++local.proximal_rounds;
    if (x == before && local.proximal_rounds > 1) break;
  }

  fix_sum(x, p.lower, p.upper, p.eq_sum);
  local.kkt_residual = qp_kkt_residual(p, x);
  if (local.kkt_residual > 1e-6) {
    throw NumericError("QP did not converge (KKT residual " + std::to_string(local.kkt_residual) + ")");
  }
  if (info) *info = local;
  return x;
}

}  // namespace

double qp_objective(const QpProblem& p, const Vector& x) {
  return 0.5 * x.dot(p.hessian * x) + p.linear.dot(x);
}

double qp_kkt_residual(const QpProblem& p, const Vector& x) {
  // With nu the sum multiplier, free variables need g_i + nu = 0, variables at
  // their lower bound g_i + nu >= 0 and at their upper bound g_i + nu <= 0.
  // The worst violation is max(nu + a, b - nu, 0), minimized in closed form.
  const Vector g = p.hessian * x + p.linear;
  double a = -kInf;  // max g over free and upper-bound variables
  double b = -kInf;  // max -g over free and lower-bound variables
  for (Index i = 0; i < x.size(); ++i) {
    const double lo = p.lower(i);
    const double hi = p.upper(i);
    if (lo == hi) continue;
    const bool low = at_lower(x(i), lo, hi);
    const bool high = at_upper(x(i), lo, hi);
    if (!low) a = std::max(a, g(i));
    if (!high) b = std::max(b, -g(i));
  }
  if (a == -kInf || b == -kInf) return 0.0;
  return std::max(0.0, 0.5 * (a + b));
}

Vector project_feasible(const Vector& lower, const Vector& upper, double eq_sum, const Vector& x) {
  auto shifted_sum = [&](double t) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += std::clamp(x(i) + t, lower(i), upper(i));
    return s;
  };
  double lo = (lower - x).minCoeff();
  double hi = (upper - x).maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (shifted_sum(mid) < eq_sum) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i) y(i) = std::clamp(x(i) + t, lower(i), upper(i));
  fix_sum(y, lower, upper, eq_sum);
  return y;
}

Vector solve_qp(const QpProblem& p, QpInfo* info) {
  const Index n = std::max<Index>(p.size(), 1);
  return solve_from(p, Vector::Constant(p.size(), p.eq_sum / static_cast<double>(n)), info);
}

Vector solve_qp(const QpProblem& p, const Vector& x0, QpInfo* info) {
  if (x0.size() != p.size()) throw ValidationError("QP warm start has the wrong dimension");
  return solve_from(p, x0, info);
}

}  // namespace sspsc
