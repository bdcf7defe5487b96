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


// Machine-readable solve reports.

#ifndef HMSVM_REPORT_HPP_
#define HMSVM_REPORT_HPP_

#include <string>

#include "hmsvm/model.hpp"

namespace hmsvm {

// One JSON object. The stable keys are instance, n, m, C, status,
// objective, lower_bound, gap_percent, cuts_generated, nodes_explored,
// time {step1, step2, step3, total}, seed and config; the remaining keys
// are diagnostics. Non-finite numbers are written as null.
std::string ReportJson(const Dataset& d, const SolverConfig& cfg,
                       const SolveReport& r, int indent = 2);

// Exit code convention shared by the command line tools.
int ExitCodeFor(SolveStatus s);

}  // namespace hmsvm

#endif  // HMSVM_REPORT_HPP_
