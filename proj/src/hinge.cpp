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

#include "hmsvm/hinge.hpp"

#include <algorithm>
#include <cmath>

#include "hmsvm/log.hpp"

namespace hmsvm {

HingeResult TrainHinge(const Dataset& d, double C, const QpSettings& settings) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw Error(ErrorCode::kInvalidInput, "C must be positive and finite");
  }
  const int n = d.n(), m = d.m();
  const int k = m + 1 + n;
  QpProblem prob;
  prob.P = Eigen::MatrixXd::Zero(k, k);
  prob.P.diagonal().head(m).setOnes();
  prob.q = Vector::Zero(k);
  prob.q.tail(n).setConstant(C);
  prob.A = Eigen::MatrixXd::Zero(n, k);
  for (int i = 0; i < n; ++i) {
    const double y = d.label(i);
    prob.A.row(i).head(m) = y * d.row(i);
    prob.A(i, m) = y;
    prob.A(i, m + 1 + i) = 1.0;
  }
  prob.lb = Vector::Ones(n);
  prob.ub = Vector::Constant(n, kInf);
  prob.var_lb = Vector::Constant(k, -kInf);
  prob.var_ub = Vector::Constant(k, kInf);
  prob.var_lb.tail(n).setZero();

  const QpSolution sol = SolveQp(prob, std::nullopt, settings);
  HingeResult out;
  out.qp_status = sol.status;
  out.converged = sol.status == QpStatus::kSolved;
  out.hyperplane.w = sol.x.head(m);
  out.hyperplane.b = sol.x[m];
  if (!out.hyperplane.IsFinite()) {
    throw Error(ErrorCode::kNumerical, "hinge QP produced a non-finite iterate");
  }
  const Vector u = Margins(d, out.hyperplane);
  out.xi = (1.0 - u.array()).max(0.0).matrix();
  out.objective = out.hyperplane.HalfNormSquared() + C * out.xi.sum();
  if (!out.converged) {
    HMSVM_LOG(kWarn, "hinge QP stopped before convergence (residuals "
                         << sol.primal_residual << ", " << sol.dual_residual
                         << ")");
  }
  return out;
}

double WeightBound(double phi_ub, bool tight) {
  return tight ? std::sqrt(2.0 * phi_ub) : 2.0 * std::sqrt(phi_ub);
}

InitBounds DeriveIncumbent(const Dataset& d, const Hyperplane& h,
                           const Vector& xi, double C, double feas_tol,
                           bool tight) {
  if (xi.size() != d.n()) {
    throw Error(ErrorCode::kDimension, "slack vector length differs from n");
  }
  InitBounds out;
  out.hyperplane = h;
  out.assignment = Assignment::Zeros(d.n());
  for (int i = 0; i < d.n(); ++i) {
    out.assignment.z[i] = xi[i] > feas_tol ? 1 : 0;
  }
  out.phi_ub = HmlObjective(d, h, out.assignment, C, feas_tol);
  out.w_ub = WeightBound(out.phi_ub, tight);
  return out;
}

std::optional<Hyperplane> TrainHardMargin(const Dataset& d,
                                          const std::vector<int>& rows,
                                          double w_box,
                                          const QpSettings& settings) {
  const int m = d.m();
  const int p = static_cast<int>(rows.size());
  if (p == 0) return Hyperplane::Zero(m);
  QpProblem prob;
  prob.P = Eigen::MatrixXd::Zero(m + 1, m + 1);
  prob.P.diagonal().head(m).setOnes();
  prob.q = Vector::Zero(m + 1);
  prob.A.resize(p, m + 1);
  for (int r = 0; r < p; ++r) {
    const int i = rows[r];
    prob.A.row(r).head(m) = d.label(i) * d.row(i);
    prob.A(r, m) = d.label(i);
  }
  prob.lb = Vector::Ones(p);
  prob.ub = Vector::Constant(p, kInf);
  prob.var_lb = Vector::Constant(m + 1, -w_box);
  prob.var_ub = Vector::Constant(m + 1, w_box);
  prob.var_lb[m] = -kInf;
  prob.var_ub[m] = kInf;

  const QpSolution sol = SolveQp(prob, std::nullopt, settings);
  Hyperplane h{sol.x.head(m), sol.x[m]};
  if (!h.IsFinite()) return std::nullopt;
  const Vector u = prob.A * sol.x;
  const double worst = u.minCoeff();
  if (worst < 1.0) {
    if (worst <= 0.0) return std::nullopt;
    h.w /= worst;
    h.b /= worst;
  }
  return h;
}

}  // namespace hmsvm
