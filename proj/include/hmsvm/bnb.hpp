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

// Exact hard-margin training: big-M branch-and-bound over the sample
// indicators, with pooled covering cuts enforced lazily, and the three-step
// driver (hinge warm start, cut harvesting, tree search).

#ifndef HMSVM_BNB_HPP_
#define HMSVM_BNB_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "hmsvm/clock.hpp"
#include "hmsvm/cuts.hpp"
#include "hmsvm/model.hpp"
#include "hmsvm/qp.hpp"

namespace hmsvm {

struct BigM {
  Vector M;
  double b_ub = 0.0;
};

// b_ub = 1 + w_ub max_i ||x_i||_1 and M_i = 1 + w_ub ||x_i||_1 + b_ub, so
// that 1 - y_i (w . x_i + b) <= M_i whenever |w_j| <= w_ub, |b| <= b_ub.
BigM DeriveBigM(const Dataset& d, double w_ub);

// Region of (w, b) searched at a node, with the matching big-M constants.
struct NodeBox {
  double w_box = 0.0;
  double b_box = 0.0;
  Vector M;
};

// Box implied by an objective ceiling: any point of the subtree that beats
// `ceiling` has ||w||_2 <= sqrt(2 (ceiling - C |ones|)), which bounds each
// |w . x_i| and therefore b and M_i. Without a finite ceiling this reduces
// to DeriveBigM. A fixed big-M policy overrides the derived M_i.
NodeBox TightenBox(const Dataset& d, double w_ub, double ceiling, double C,
                   int fixed_ones, const BigMPolicy& policy);

struct NodeRelaxation {
  bool infeasible = false;
  double value = 0.0;  // QP objective at the returned point, plus C |ones|
  double bound = -kInf;  // rigorous lower bound for the node
  Vector z;             // all n indicators, fixed ones included
  Hyperplane hyperplane;
  QpSolution qp;        // raw solution in node-local layout
};

// Convex relaxation at a node: min 1/2 ||w||^2 + C sum z over (w, b, free
// z) subject to y_i (w . x_i + b) >= 1 - M_i z_i, the covering rows of
// `cuts`, the box, and the fixings. Fixed-one samples and cuts they satisfy
// drop out. Infeasibility is decided by a min-slack check on the fixed-zero
// rows and by cuts contained in the fixed-zero set.
NodeRelaxation SolveNodeRelaxation(
    const Dataset& d, const std::vector<std::int8_t>& fix,
    const std::vector<std::vector<int>>& cuts, double C, const NodeBox& box,
    const QpSettings& settings = {},
    const std::optional<QpWarmStart>& warm = std::nullopt,
    double feas_tol = kDefaultFeasTol);

// Positions in `cuts` of the cuts with sum_{i in S} z_i = 0.
std::vector<int> ViolatedCuts(const Assignment& z, const std::vector<Cut>& cuts);

struct TreeResult {
  Hyperplane hyperplane;
  Assignment assignment;
  double upper_bound = kInf;
  double lower_bound = 0.0;
  double root_bound = 0.0;
  bool finished = false;  // tree exhausted or gap closed
  long nodes = 0;
  long active_cuts = 0;
};

// Step 3 from a known incumbent. `pool` supplies lazily enforced cuts.
TreeResult RunBranchAndBound(const Dataset& d, const SolverConfig& cfg,
                             double w_ub, const Hyperplane& incumbent_h,
                             const Assignment& incumbent_z,
                             const CutPool& pool, const Deadline& deadline);

// All three steps under cfg.t_max.
SolveReport Solve(const Dataset& d, const SolverConfig& cfg);

}  // namespace hmsvm

#endif  // HMSVM_BNB_HPP_
