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

#include "hmsvm/mis.hpp"

#include <algorithm>
#include <numeric>

#include "hmsvm/log.hpp"

namespace hmsvm {

void Subsystem::Validate() const {
  if (data == nullptr) {
    throw Error(ErrorCode::kInvalidInput, "subsystem has no dataset");
  }
  if (!(w_ub >= 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "weight box must be nonnegative");
  }
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidInput, "subsystem indices repeat");
  }
  if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= data->n())) {
    throw Error(ErrorCode::kInvalidInput, "subsystem index out of range");
  }
}

namespace {

SlackResult SlackOf(const Dataset& d, const std::vector<int>& rows,
                    double w_ub, double b_ub, const Deadline& deadline) {
  const int m = d.m();
  const int p = static_cast<int>(rows.size());
  RowMatrix a(p, m + 1);
  for (int r = 0; r < p; ++r) {
    const double y = d.label(rows[r]);
    a.row(r).head(m) = y * d.row(rows[r]);
    a(r, m) = y;
  }
  Vector lo = Vector::Constant(m + 1, -w_ub);
  Vector hi = Vector::Constant(m + 1, w_ub);
  lo[m] = IsInfinite(b_ub) ? -kInf : -b_ub;
  hi[m] = IsInfinite(b_ub) ? kInf : b_ub;
  return MinSlackFeasibility(a, Vector::Ones(p), lo, hi, deadline);
}

void NoteBorderline(double slack, double feas_tol) {
  if (slack > 0.5 * feas_tol && slack <= 2.0 * feas_tol) {
    HMSVM_LOG(kDebug, "borderline margin subsystem: min slack " << slack
                          << " against tolerance " << feas_tol);
  }
}

}  // namespace

SlackResult SubsystemSlack(const Subsystem& sub, const Deadline& deadline) {
  sub.Validate();
  return SlackOf(*sub.data, sub.indices, sub.w_ub, sub.b_ub, deadline);
}

bool IsFeasible(const Subsystem& sub, double feas_tol,
                const Deadline& deadline) {
  const SlackResult r = SubsystemSlack(sub, deadline);
  NoteBorderline(r.slack_total, feas_tol);
  return r.slack_total <= feas_tol;
}

std::vector<int> ExtractMis(const Subsystem& sub, double feas_tol,
                            const Deadline& deadline) {
  sub.Validate();
  const Dataset& d = *sub.data;
  SlackResult cert = SlackOf(d, sub.indices, sub.w_ub, sub.b_ub, deadline);
  if (cert.slack_total <= feas_tol) {
    throw Error(ErrorCode::kInvalidInput,
                "cannot extract an infeasible subsystem from a feasible one");
  }

  // Try rows with the largest violation at the witness first.
  const Hyperplane witness{cert.witness.head(d.m()), cert.witness[d.m()]};
  const Vector u = Margins(d, witness);
  std::vector<int> order = sub.indices;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = std::max(0.0, 1.0 - u[a]);
    const double sb = std::max(0.0, 1.0 - u[b]);
    return sa != sb ? sa > sb : a < b;
  });

  // `current` holds the surviving rows in subsystem order, and `weight`
  // their multipliers in the latest infeasibility certificate. A row with
  // zero weight can go without a solve: the same certificate still proves
  // the rest infeasible.
  std::vector<int> current = sub.indices;
  std::vector<double> weight = cert.multipliers;
  for (int idx : order) {
    const auto pos = std::find(current.begin(), current.end(), idx);
    const auto at = pos - current.begin();
    if (weight[at] == 0.0) {
      current.erase(pos);
      weight.erase(weight.begin() + at);
      continue;
    }
    std::vector<int> trial = current;
    trial.erase(trial.begin() + at);
    SlackResult r = SlackOf(d, trial, sub.w_ub, sub.b_ub, deadline);
    NoteBorderline(r.slack_total, feas_tol);
    if (r.slack_total > feas_tol) {
      current = std::move(trial);
      weight = std::move(r.multipliers);
    }
  }
  std::sort(current.begin(), current.end());
  return current;
}

}  // namespace hmsvm
