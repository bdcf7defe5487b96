// Copyright 2026 The hmsvm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Convex quadratic programs
//
//   min 1/2 x'Px + q'x  s.t.  lb <= A x <= ub,  var_lb <= x <= var_ub
//
// solved by operator splitting (ADMM on the constraint copy z = A x, with a
// proximal quadratic step for x and a projection step for z), Ruiz
// equilibration, adaptive step size and active-set polishing.

#ifndef HMSVM_QP_HPP_
#define HMSVM_QP_HPP_

#include <optional>

#include "hmsvm/clock.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

struct QpProblem {
  Eigen::MatrixXd P;
  Vector q;
  Eigen::MatrixXd A;
  Vector lb, ub;
  Vector var_lb, var_ub;

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }
  // Free variables, no rows.
  static QpProblem Unconstrained(Eigen::MatrixXd P, Vector q);
  void Validate() const;
  double Objective(const Vector& x) const;
};

enum class QpStatus { kSolved, kMaxIter, kInfeasible };

struct QpSettings {
  double eps_abs = 1e-8;
  double eps_rel = 1e-8;
  double eps_infeasible = 1e-7;
  int max_iter = 20000;
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;
  // Rebalance rho when normalized primal/dual residuals differ by this.
  double rho_ratio = 10.0;
  int check_every = 10;
  bool scaling = true;
  bool polish = true;
  Deadline deadline;
};

struct QpWarmStart {
  Vector x;
  Vector y;       // row multipliers, optional (size 0 = none)
  Vector y_vars;  // variable-bound multipliers, optional
};

struct QpSolution {
  Vector x;
  // Multipliers with P x + q + A'y + y_vars = 0; negative entries belong to
  // active lower bounds, positive ones to active upper bounds.
  Vector y;
  Vector y_vars;
  double objective = 0.0;
  QpStatus status = QpStatus::kMaxIter;
  double primal_residual = kInf;
  double dual_residual = kInf;
  int iterations = 0;
  bool polished = false;
};

QpSolution SolveQp(const QpProblem& prob,
                   const std::optional<QpWarmStart>& warm = std::nullopt,
                   const QpSettings& settings = {});

// Lagrangian lower bound g(y) for problems whose P is diagonal and whose
// variables all have finite bounds. Valid for any y: entries with the wrong
// sign for their row bounds are clipped to zero. Returns -inf when the bound
// is not available.
double LagrangianBound(const QpProblem& prob, const Vector& y);

}  // namespace hmsvm

#endif  // HMSVM_QP_HPP_
