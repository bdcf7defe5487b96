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

#include "hmsvm/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hmsvm {

Dataset::Dataset(RowMatrix features, Vector labels, std::string name)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw Error(ErrorCode::kInvalidInput,
                "dataset needs at least one sample and one feature");
  }
  if (features_.rows() != labels_.size()) {
    std::ostringstream os;
    os << "feature rows (" << features_.rows() << ") != labels ("
       << labels_.size() << ")";
    throw Error(ErrorCode::kDimension, os.str());
  }
  for (int i = 0; i < n(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      std::ostringstream os;
      os << "label of sample " << i << " is " << labels_[i]
         << ", expected -1 or +1";
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
    if (!features_.row(i).allFinite()) {
      std::ostringstream os;
      os << "sample " << i << " has a non-finite feature";
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
  }
}

Dataset Dataset::Renamed(std::string name) const {
  return Dataset(features_, labels_, std::move(name));
}

Dataset Dataset::Subset(const std::vector<int>& indices) const {
  RowMatrix x(indices.size(), m());
  Vector y(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    x.row(k) = features_.row(indices[k]);
    y[k] = labels_[indices[k]];
  }
  return Dataset(std::move(x), std::move(y), name_);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.name_ == b.name_ && a.features_.rows() == b.features_.rows() &&
         a.features_.cols() == b.features_.cols() &&
         a.features_ == b.features_ && a.labels_ == b.labels_;
}

int Assignment::Count() const {
  return std::accumulate(z.begin(), z.end(), 0);
}

void SolverConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidInput, msg);
  };
  if (!(C > 0.0) || !std::isfinite(C)) fail("C must be positive and finite");
  if (!(feas_tol > 0.0) || !(opt_tol > 0.0)) fail("tolerances must be > 0");
  if (t_s < 0.0 || t_b < 0.0) fail("time budgets must be non-negative");
  if (!(t_s + t_b <= t_max)) fail("t_s + t_b must not exceed t_max");
  if (sample_size_cap < 1) fail("sample_size_cap must be positive");
  if (big_m.mode == BigMPolicy::Mode::kFixed && !(big_m.value >= 1.0)) {
    fail("fixed big-M must be at least 1");
  }
}

const char* ToString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kTimeLimit:
      return "TimeLimit";
    case SolveStatus::kInfeasibleInput:
      return "Infeasible-input";
    case SolveStatus::kError:
      return "Error";
  }
  return "Error";
}

double HingeLoss(double u) { return std::max(0.0, 1.0 - u); }

int HardMarginLoss(double u) { return u < 1.0 ? 1 : 0; }

Vector Margins(const Dataset& d, const Hyperplane& h) {
  if (h.w.size() != d.m()) {
    std::ostringstream os;
    os << "hyperplane has " << h.w.size() << " weights, dataset has " << d.m()
       << " features";
    throw Error(ErrorCode::kDimension, os.str());
  }
  Vector u = d.features() * h.w;
  u.array() += h.b;
  return u.cwiseProduct(d.labels());
}

double HmlObjective(const Dataset& d, const Hyperplane& h, const Assignment& z,
                    double C, double feas_tol) {
  if (z.size() != d.n()) {
    throw Error(ErrorCode::kDimension, "assignment length differs from n");
  }
  const Vector u = Margins(d, h);
  for (int i = 0; i < d.n(); ++i) {
    if (z[i] == 0 && u[i] < 1.0 - feas_tol) {
      std::ostringstream os;
      os << "sample " << i << " has z = 0 but margin " << u[i];
      throw Error(ErrorCode::kInvalidInput, os.str());
    }
  }
  return h.HalfNormSquared() + C * z.Count();
}

Assignment AssignmentFromMargins(const Vector& margins) {
  Assignment a = Assignment::Zeros(static_cast<int>(margins.size()));
  for (int i = 0; i < a.size(); ++i) a.z[i] = HardMarginLoss(margins[i]);
  return a;
}

double RelativeGap(double upper, double lower) {
  const double tiny = 1e-9 * std::max(1.0, std::abs(upper));
  if (lower > upper + tiny) {
    std::ostringstream os;
    os.precision(17);
    os << "lower bound " << lower << " exceeds upper bound " << upper;
    throw Error(ErrorCode::kNumerical, os.str());
  }
  if (upper == 0.0 && lower == 0.0) return 0.0;
  const double diff = std::max(0.0, upper - lower);
  return 100.0 * diff / std::max(std::abs(upper), 1e-10);
}

}  // namespace hmsvm
