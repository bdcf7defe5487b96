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

// Warm start: the hinge-loss SVM, the hard-margin incumbent derived from
// it, and the bounds that incumbent implies for the exact search.

#ifndef HMSVM_HINGE_HPP_
#define HMSVM_HINGE_HPP_

#include <optional>
#include <vector>

#include "hmsvm/model.hpp"
#include "hmsvm/qp.hpp"

namespace hmsvm {

struct HingeResult {
  Hyperplane hyperplane;
  // max(0, 1 - u_i) evaluated at the returned hyperplane.
  Vector xi;
  double objective = 0.0;  // 1/2 ||w||^2 + C sum xi
  bool converged = false;
  QpStatus qp_status = QpStatus::kMaxIter;
};

// Primal soft-margin QP over (w, b, xi). A non-converged solve still
// returns its best iterate with converged = false; the slack vector is
// always recomputed from the hyperplane, so it is exact for that iterate.
HingeResult TrainHinge(const Dataset& d, double C,
                       const QpSettings& settings = {});

struct InitBounds {
  Hyperplane hyperplane;
  Assignment assignment;
  double phi_ub = 0.0;
  double w_ub = 0.0;
};

// z_i = 1 iff xi_i > feas_tol; phi_ub is the hard-margin objective of the
// result and w_ub = 2 sqrt(phi_ub), or sqrt(2 phi_ub) when `tight` is set.
InitBounds DeriveIncumbent(const Dataset& d, const Hyperplane& h,
                           const Vector& xi, double C,
                           double feas_tol = kDefaultFeasTol,
                           bool tight = false);

double WeightBound(double phi_ub, bool tight);

// Minimum-norm hyperplane with y_i (w . x_i + b) >= 1 on `rows`, each w_j
// in [-w_box, w_box] and b free. The caller establishes feasibility first;
// small residual violations are repaired by rescaling (w, b) so that every
// listed margin is at least 1. Returns nullopt if no repair is possible.
std::optional<Hyperplane> TrainHardMargin(const Dataset& d,
                                          const std::vector<int>& rows,
                                          double w_box,
                                          const QpSettings& settings = {});

}  // namespace hmsvm

#endif  // HMSVM_HINGE_HPP_
