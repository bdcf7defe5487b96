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

#include "hmsvm/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hmsvm/model.hpp"

namespace hmsvm {

int LpProblem::AddColumn(double c, double lo, double hi, SparseColumn col) {
  columns.push_back(std::move(col));
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_cols() - 1;
}

namespace {

// Work-clock weight of one counted simplex operation relative to one QP
// multiply-add: pricing and ratio tests walk sparse columns with indirect
// access and run several times slower per operation than dense kernels.
constexpr double kWorkWeight = 4.5;

enum class NonbasicAt { kLower, kUpper, kZero };

// Degenerate pivots in a row before switching to Bland's rule.
constexpr int kStallLimit = 30;

class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& lp, const LpOptions& options)
      : lp_(lp),
        opt_(options),
        m_(lp.num_rows),
        n_(lp.num_cols()),
        total_(n_ + m_),
        lo_(total_),
        hi_(total_),
        x_(total_, 0.0),
        at_(total_, NonbasicAt::kLower),
        pos_(total_, -1),
        basis_(m_),
        sign_(m_, 1.0),
        binv_(Eigen::MatrixXd::Identity(m_, m_)) {
    for (int j = 0; j < n_; ++j) {
      lo_[j] = IsInfinite(lp.lower[j]) ? -kInf : lp.lower[j];
      hi_[j] = IsInfinite(lp.upper[j]) ? kInf : lp.upper[j];
      if (lo_[j] > hi_[j]) {
        throw Error(ErrorCode::kInvalidInput, "LP column with lower > upper");
      }
      if (std::isfinite(lo_[j])) {
        x_[j] = lo_[j];
        at_[j] = NonbasicAt::kLower;
      } else if (std::isfinite(hi_[j])) {
        x_[j] = hi_[j];
        at_[j] = NonbasicAt::kUpper;
      } else {
        x_[j] = 0.0;
        at_[j] = NonbasicAt::kZero;
      }
    }
    std::vector<double> residual(lp.rhs.begin(), lp.rhs.end());
    for (int j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      const SparseColumn& c = lp.columns[j];
      for (std::size_t k = 0; k < c.rows.size(); ++k) {
        residual[c.rows[k]] -= c.values[k] * x_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int a = n_ + i;
      sign_[i] = residual[i] >= 0.0 ? 1.0 : -1.0;
      lo_[a] = 0.0;
      hi_[a] = kInf;
      x_[a] = std::abs(residual[i]);
      basis_[i] = a;
      pos_[a] = i;
      binv_(i, i) = sign_[i];
      rhs_scale_ = std::max(rhs_scale_, std::abs(lp.rhs[i]));
    }
    max_iter_ = opt_.max_iterations > 0 ? opt_.max_iterations
                                        : 50 * (n_ + m_) + 10000;
  }

  LpResult Run() {
    LpResult result;
    std::vector<double> phase1(total_, 0.0);
    for (int i = 0; i < m_; ++i) phase1[n_ + i] = 1.0;
    LpStatus s = Iterate(phase1);
    if (s == LpStatus::kIterationLimit) return Finish(s, result);
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i) infeas += x_[n_ + i];
    if (infeas > opt_.primal_tol * std::max(1.0, rhs_scale_) * (1 + m_)) {
      return Finish(LpStatus::kInfeasible, result);
    }
    for (int i = 0; i < m_; ++i) {
      const int a = n_ + i;
      hi_[a] = 0.0;
      if (pos_[a] < 0) x_[a] = 0.0;
    }
    std::vector<double> phase2(total_, 0.0);
    for (int j = 0; j < n_; ++j) phase2[j] = lp_.cost[j];
    s = Iterate(phase2);
    result.objective = 0.0;
    for (int j = 0; j < n_; ++j) result.objective += lp_.cost[j] * x_[j];
    Reinvert();
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = phase2[basis_[i]];
    Eigen::VectorXd y = binv_.transpose() * cb;
    result.row_duals.assign(y.data(), y.data() + m_);
    return Finish(s, result);
  }

 private:
  LpResult& Finish(LpStatus s, LpResult& r) {
    r.status = s;
    r.iterations = iterations_;
    r.x.assign(x_.begin(), x_.begin() + n_);
    return r;
  }

  double ColumnDot(int j, const Eigen::VectorXd& y) const {
    if (j >= n_) return sign_[j - n_] * y[j - n_];
    const SparseColumn& c = lp_.columns[j];
    double s = 0.0;
    for (std::size_t k = 0; k < c.rows.size(); ++k) {
      s += c.values[k] * y[c.rows[k]];
    }
    return s;
  }

  Eigen::VectorXd Ftran(int j) const {
    if (j >= n_) return sign_[j - n_] * binv_.col(j - n_);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    const SparseColumn& c = lp_.columns[j];
    for (std::size_t k = 0; k < c.rows.size(); ++k) {
      a += c.values[k] * binv_.col(c.rows[k]);
    }
    return a;
  }

  void Reinvert() {
    if (m_ == 0) return;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j >= n_) {
        b(j - n_, i) = sign_[j - n_];
      } else {
        const SparseColumn& c = lp_.columns[j];
        for (std::size_t k = 0; k < c.rows.size(); ++k) {
          b(c.rows[k], i) += c.values[k];
        }
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    binv_ = lu.inverse();
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(lp_.rhs.data(), m_);
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      if (j >= n_) {
        r[j - n_] -= sign_[j - n_] * x_[j];
      } else {
        const SparseColumn& c = lp_.columns[j];
        for (std::size_t k = 0; k < c.rows.size(); ++k) {
          r[c.rows[k]] -= c.values[k] * x_[j];
        }
      }
    }
    Eigen::VectorXd xb = binv_ * r;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    opt_.deadline.Charge(kWorkWeight * 2.0 * m_ * m_ * m_);
  }

  LpStatus Iterate(const std::vector<double>& cost) {
    int since_refactor = 0;
    int stall = 0;
    bool bland = false;
    Eigen::VectorXd cb(m_);
    while (true) {
      if (iterations_ >= max_iter_) return LpStatus::kIterationLimit;
      if (since_refactor >= opt_.refactor_every) {
        Reinvert();
        since_refactor = 0;
      }
      for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      const Eigen::VectorXd y = binv_.transpose() * cb;

      // Pricing.
      int enter = -1;
      double enter_dir = 0.0;
      double best = 0.0;
      long nnz = 0;
      for (int j = 0; j < total_; ++j) {
        if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double d = cost[j] - ColumnDot(j, y);
        nnz += j < n_ ? static_cast<long>(lp_.columns[j].rows.size()) : 1;
        const double tol = opt_.dual_tol * (1.0 + std::abs(cost[j]));
        double dir = 0.0;
        switch (at_[j]) {
          case NonbasicAt::kLower:
            if (d < -tol) dir = 1.0;
            break;
          case NonbasicAt::kUpper:
            if (d > tol) dir = -1.0;
            break;
          case NonbasicAt::kZero:
            if (std::abs(d) > tol) dir = d < 0 ? 1.0 : -1.0;
            break;
        }
        if (dir == 0.0) continue;
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          enter_dir = dir;
        }
      }
      opt_.deadline.Charge(kWorkWeight * (static_cast<double>(m_) * m_ + nnz));
      if (enter < 0) return LpStatus::kOptimal;

      const Eigen::VectorXd alpha = Ftran(enter);

      // Ratio test: x_B changes by -dir * alpha * theta.
      double theta = hi_[enter] - lo_[enter];  // inf when unbounded
      int leave_row = -1;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(alpha[i]) <= opt_.pivot_tol) continue;
        const double rate = -enter_dir * alpha[i];
        const int bj = basis_[i];
        double t;
        if (rate < 0) {
          if (!std::isfinite(lo_[bj])) continue;
          t = (x_[bj] - lo_[bj]) / -rate;
        } else {
          if (!std::isfinite(hi_[bj])) continue;
          t = (hi_[bj] - x_[bj]) / rate;
        }
        t = std::max(t, 0.0);
        bool take = false;
        if (t < theta - 1e-12) {
          take = true;
        } else if (t <= theta + 1e-12) {
          if (leave_row < 0) {
            take = true;  // prefer a pivot over a bound flip on ties
          } else {
            take = bland ? bj < basis_[leave_row]
                         : std::abs(alpha[i]) > std::abs(leave_alpha);
          }
        }
        if (take) {
          theta = std::min(theta, t);
          leave_row = i;
          leave_alpha = alpha[i];
        }
      }
      if (!std::isfinite(theta)) return LpStatus::kUnbounded;

      x_[enter] += enter_dir * theta;
      for (int i = 0; i < m_; ++i) {
        x_[basis_[i]] += -enter_dir * alpha[i] * theta;
      }
      if (leave_row >= 0) {
        const int out = basis_[leave_row];
        const double rate = -enter_dir * alpha[leave_row];
        if (rate < 0) {
          x_[out] = lo_[out];
          at_[out] = NonbasicAt::kLower;
        } else {
          x_[out] = hi_[out];
          at_[out] = NonbasicAt::kUpper;
        }
        pos_[out] = -1;
        basis_[leave_row] = enter;
        pos_[enter] = leave_row;
        const double piv = alpha[leave_row];
        binv_.row(leave_row) /= piv;
        for (int i = 0; i < m_; ++i) {
          if (i == leave_row || alpha[i] == 0.0) continue;
          binv_.row(i) -= alpha[i] * binv_.row(leave_row);
        }
        ++since_refactor;
      } else {
        // Bound flip.
        if (enter_dir > 0) {
          x_[enter] = hi_[enter];
          at_[enter] = NonbasicAt::kUpper;
        } else {
          x_[enter] = lo_[enter];
          at_[enter] = NonbasicAt::kLower;
        }
      }
      opt_.deadline.Charge(kWorkWeight * m_ * m_);
      ++iterations_;
      if (theta <= 1e-12) {
        if (++stall > kStallLimit) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }
  }

  const LpProblem& lp_;
  LpOptions opt_;
  int m_, n_, total_;
  std::vector<double> lo_, hi_, x_;
  std::vector<NonbasicAt> at_;
  std::vector<int> pos_;
  std::vector<int> basis_;
  std::vector<double> sign_;
  Eigen::MatrixXd binv_;
  double rhs_scale_ = 0.0;
  int iterations_ = 0;
  int max_iter_ = 0;
};

}  // namespace

LpResult SolveLp(const LpProblem& lp, const LpOptions& options) {
  if (static_cast<int>(lp.rhs.size()) != lp.num_rows ||
      lp.cost.size() != lp.columns.size() ||
      lp.lower.size() != lp.columns.size() ||
      lp.upper.size() != lp.columns.size()) {
    throw Error(ErrorCode::kDimension, "inconsistent LP dimensions");
  }
  RevisedSimplex simplex(lp, options);
  return simplex.Run();
}

}  // namespace hmsvm
