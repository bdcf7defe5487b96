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

// Feasibility of margin subsystems
//
//   y_i (w . x_i + b) >= 1  for i in I,   |w_j| <= w_ub,   b free,
//
// and extraction of inclusion-minimal infeasible subsystems by a deletion
// filter.

#ifndef HMSVM_MIS_HPP_
#define HMSVM_MIS_HPP_

#include <vector>

#include "hmsvm/clock.hpp"
#include "hmsvm/feasibility.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

struct Subsystem {
  const Dataset* data = nullptr;
  std::vector<int> indices;  // unique, in range
  double w_ub = 0.0;
  // Optional bound on |b|; infinite leaves the intercept free.
  double b_ub = kInf;

  void Validate() const;
};

SlackResult SubsystemSlack(const Subsystem& sub,
                           const Deadline& deadline = Deadline::Never());

bool IsFeasible(const Subsystem& sub, double feas_tol = kDefaultFeasTol,
                const Deadline& deadline = Deadline::Never());

// Sorted member indices of a minimal infeasible subset of sub.indices.
// Throws if the subsystem is feasible.
std::vector<int> ExtractMis(const Subsystem& sub,
                            double feas_tol = kDefaultFeasTol,
                            const Deadline& deadline = Deadline::Never());

}  // namespace hmsvm

#endif  // HMSVM_MIS_HPP_
