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


// Exhaustive reference solver for small instances: every indicator vector
// is tried, so the result is the global hard-margin optimum within the
// weight box derived from the hinge warm start.

#ifndef HMSVM_ORACLE_HPP_
#define HMSVM_ORACLE_HPP_

#include <vector>

#include "hmsvm/model.hpp"

namespace hmsvm {

inline constexpr int kOracleMaxSamples = 16;

struct OracleOptimum {
  Assignment assignment;
  Hyperplane hyperplane;
  double objective = 0.0;
};

struct OracleResult {
  double objective = kInf;
  // Every assignment whose objective ties the optimum (relative 1e-9),
  // in enumeration order: fewest sacrificed samples first, then by the
  // binary value of z read with sample 0 as the lowest bit.
  std::vector<OracleOptimum> optima;
  double w_ub = 0.0;
  long assignments_checked = 0;  // feasibility LPs actually solved
};

// Throws Error(kTooLarge) when n > kOracleMaxSamples.
OracleResult SolveByEnumeration(const Dataset& d, double C,
                                bool tight_wub = false,
                                double feas_tol = kDefaultFeasTol);

}  // namespace hmsvm

#endif  // HMSVM_ORACLE_HPP_
