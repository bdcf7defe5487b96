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

#include "hmsvm/feasibility.hpp"

#include <algorithm>

#include "hmsvm/simplex.hpp"

namespace hmsvm {

// Dual of the min-slack LP, written as a minimization:
//
//   min  -d'lambda - l'alpha + u'beta
//   s.t. A'lambda + alpha - beta = 0,  0 <= lambda <= 1,  alpha, beta >= 0
//
// alpha_j exists only for finite l_j and beta_j only for finite u_j. With y
// the simplex multipliers of the equality rows, x = -y is the primal
// minimizer: the reduced cost of lambda_i is a_i . x - d_i, so lambda_i = 1
// exactly on rows the witness violates.
SlackResult MinSlackFeasibility(const RowMatrix& a, const Vector& d,
                                const Vector& var_lb, const Vector& var_ub,
                                const Deadline& deadline) {
  const int p = static_cast<int>(a.rows());
  const int k = static_cast<int>(a.cols());
  if (d.size() != p || var_lb.size() != k || var_ub.size() != k) {
    throw Error(ErrorCode::kDimension, "min-slack system dimensions differ");
  }
  for (int j = 0; j < k; ++j) {
    if (var_lb[j] > var_ub[j]) {
      throw Error(ErrorCode::kInvalidInput, "variable bounds are inconsistent");
    }
  }
  SlackResult out;
  out.witness = Vector::Zero(k);
  for (int j = 0; j < k; ++j) {
    out.witness[j] = std::clamp(0.0, var_lb[j], var_ub[j]);
  }
  out.multipliers.assign(p, 0.0);
  if (p == 0) return out;

  LpProblem lp;
  lp.num_rows = k;
  lp.rhs.assign(k, 0.0);
  for (int i = 0; i < p; ++i) {
    SparseColumn col;
    for (int j = 0; j < k; ++j) {
      if (a(i, j) != 0.0) {
        col.rows.push_back(j);
        col.values.push_back(a(i, j));
      }
    }
    lp.AddColumn(-d[i], 0.0, 1.0, std::move(col));
  }
  for (int j = 0; j < k; ++j) {
    if (!IsInfinite(var_lb[j])) {
      lp.AddColumn(-var_lb[j], 0.0, kInf, SparseColumn{{j}, {1.0}});
    }
    if (!IsInfinite(var_ub[j])) {
      lp.AddColumn(var_ub[j], 0.0, kInf, SparseColumn{{j}, {-1.0}});
    }
  }
  LpOptions options;
  options.deadline = deadline;
  const LpResult r = SolveLp(lp, options);
  if (r.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumerical, "min-slack LP did not reach optimality");
  }
  out.slack_total = std::max(0.0, -r.objective);
  for (int j = 0; j < k; ++j) {
    out.witness[j] = std::clamp(-r.row_duals[j], var_lb[j], var_ub[j]);
  }
  for (int i = 0; i < p; ++i) out.multipliers[i] = r.x[i];
  return out;
}

}  // namespace hmsvm
