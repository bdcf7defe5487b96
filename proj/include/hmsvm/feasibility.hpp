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

#ifndef HMSVM_FEASIBILITY_HPP_
#define HMSVM_FEASIBILITY_HPP_

#include <vector>

#include "hmsvm/clock.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

struct SlackResult {
  double slack_total = 0.0;
  Vector witness;
  // Optimal multiplier per row, in [0, 1]. Rows with a zero multiplier can
  // be dropped without lowering the minimum slack.
  std::vector<double> multipliers;
};

// Solves  min sum_i s_i  s.t.  a_i . x + s_i >= d_i,  s >= 0,
// var_lb <= x <= var_ub  (the phase-1 form is always feasible). The system
// {a_i . x >= d_i} is feasible iff slack_total <= feas_tol.
//
// Internally the LP dual, which has one row per variable, is handed to the
// simplex; the witness is recovered from its multipliers.
SlackResult MinSlackFeasibility(const RowMatrix& a, const Vector& d,
                                const Vector& var_lb, const Vector& var_ub,
                                const Deadline& deadline = Deadline::Never());

}  // namespace hmsvm

#endif  // HMSVM_FEASIBILITY_HPP_
