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

// Dense revised primal simplex for small linear programs in bounded
// standard form
//
//   min c'x  s.t.  A x = rhs,  lower <= x <= upper,
//
// with sparse columns and an explicit basis inverse. Intended for problems
// with few rows (tens to a few hundred) and arbitrarily many columns.

#ifndef HMSVM_SIMPLEX_HPP_
#define HMSVM_SIMPLEX_HPP_

#include <vector>

#include "hmsvm/clock.hpp"

namespace hmsvm {

struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> values;
};

struct LpProblem {
  int num_rows = 0;
  std::vector<SparseColumn> columns;
  std::vector<double> cost;
  std::vector<double> lower;  // -inf allowed
  std::vector<double> upper;  // +inf allowed
  std::vector<double> rhs;

  int num_cols() const { return static_cast<int>(columns.size()); }
  int AddColumn(double cost, double lower, double upper, SparseColumn col);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_every = 50;
  int max_iterations = 0;  // 0 = automatic
  Deadline deadline;       // work is charged here
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  // Simplex multipliers y with reduced costs c - A'y.
  std::vector<double> row_duals;
  int iterations = 0;
};

LpResult SolveLp(const LpProblem& lp, const LpOptions& options = {});

}  // namespace hmsvm

#endif  // HMSVM_SIMPLEX_HPP_
