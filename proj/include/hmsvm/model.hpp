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

// Domain types shared by every solver stage: datasets, separating
// hyperplanes, 0/1 assignments, solver configuration and the solve report,
// together with the loss and objective helpers.

#ifndef HMSVM_MODEL_HPP_
#define HMSVM_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hmsvm {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class ErrorCode {
  kInvalidInput = 1,
  kIo,
  kParse,
  kDimension,
  kNumerical,
  kTooLarge,
  kTimeLimit,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kDefaultFeasTol = 1e-6;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Any magnitude at or above this is treated as an infinite bound.
inline constexpr double kInfSentinel = 1e20;
inline bool IsInfinite(double v) { return !(std::abs(v) < kInfSentinel); }

// n samples x m features, labels in {-1, +1}. Immutable once built.
class Dataset {
 public:
  Dataset(RowMatrix features, Vector labels, std::string name = "");

  const RowMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  int n() const { return static_cast<int>(features_.rows()); }
  int m() const { return static_cast<int>(features_.cols()); }

  auto row(int i) const { return features_.row(i); }
  double label(int i) const { return labels_[i]; }

  // Same data under a different name.
  Dataset Renamed(std::string name) const;
  // Rows in `indices`, in that order.
  Dataset Subset(const std::vector<int>& indices) const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  RowMatrix features_;
  Vector labels_;
  std::string name_;
};

struct Hyperplane {
  Vector w;
  double b = 0.0;

  static Hyperplane Zero(int m) { return {Vector::Zero(m), 0.0}; }
  double HalfNormSquared() const { return 0.5 * w.squaredNorm(); }
  bool IsFinite() const { return w.allFinite() && std::isfinite(b); }
};

// z_i = 1 marks sample i as misclassified or within the margin.
struct Assignment {
  std::vector<std::uint8_t> z;

  static Assignment Zeros(int n) { return {std::vector<std::uint8_t>(n, 0)}; }
  static Assignment Ones(int n) { return {std::vector<std::uint8_t>(n, 1)}; }
  int size() const { return static_cast<int>(z.size()); }
  int Count() const;
  std::uint8_t operator[](int i) const { return z[i]; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct BigMPolicy {
  enum class Mode { kDerived, kFixed };
  Mode mode = Mode::kDerived;
  double value = 0.0;  // used when mode == kFixed
};

struct SolverConfig {
  double C = 1.0;
  double t_max = 600.0;
  double t_s = 30.0;
  double t_b = 30.0;
  double feas_tol = kDefaultFeasTol;
  double opt_tol = 1e-6;
  std::uint64_t seed = 0;
  BigMPolicy big_m;
  int sample_size_cap = 50;

  bool use_cuts = true;
  // Weight box sqrt(2 U) instead of 2 sqrt(U), U the incumbent objective.
  bool tight_wub = false;
  // Sequential execution with the deterministic work clock.
  bool single_thread = false;
  bool dominance_filter = true;
  bool qp_warm_start = true;
  // Stop sampling after this many consecutive subsets yield no new cut
  // (0 disables the rule).
  int sampling_patience = 50;
  int subset_node_cap = 200;
  int threads = 0;  // 0 = hardware concurrency

  void Validate() const;
};

enum class SolveStatus { kOptimal, kTimeLimit, kInfeasibleInput, kError };
const char* ToString(SolveStatus s);

struct StageTimes {
  double step1 = 0.0;
  double step2 = 0.0;
  double step3 = 0.0;
  double Total() const { return step1 + step2 + step3; }
};

struct SolveReport {
  Hyperplane hyperplane;
  Assignment assignment;
  double upper_bound = kInf;
  double lower_bound = 0.0;
  double gap_percent = 100.0;
  SolveStatus status = SolveStatus::kError;
  long nodes_explored = 0;
  long cuts_generated = 0;
  StageTimes elapsed;

  // Diagnostics beyond the headline numbers.
  double w_ub = 0.0;
  double b_ub = 0.0;
  double phi_ub = kInf;
  double root_bound = 0.0;
  long cuts_sampled = 0;
  long subsets_sampled = 0;
  long active_cuts = 0;
  std::string message;
  std::vector<std::vector<int>> cuts;  // the Step-2 pool, 0-based members
};

double HingeLoss(double u);
int HardMarginLoss(double u);

// u_i = y_i (w . x_i + b).
Vector Margins(const Dataset& d, const Hyperplane& h);

// 1/2 ||w||^2 + C sum z_i. Throws if some z_i = 0 sample has margin below
// 1 - feas_tol.
double HmlObjective(const Dataset& d, const Hyperplane& h, const Assignment& z,
                    double C, double feas_tol = kDefaultFeasTol);

// z_i = 1 exactly when u_i < 1.
Assignment AssignmentFromMargins(const Vector& margins);

// 100 (upper - lower) / max(|upper|, 1e-10); 0 when both are 0.
double RelativeGap(double upper, double lower);

}  // namespace hmsvm

#endif  // HMSVM_MODEL_HPP_
