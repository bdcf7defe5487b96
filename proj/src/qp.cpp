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

#include "hmsvm/qp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hmsvm {

QpProblem QpProblem::Unconstrained(Eigen::MatrixXd P, Vector q) {
  const Eigen::Index k = q.size();
  QpProblem prob;
  prob.P = std::move(P);
  prob.q = std::move(q);
  prob.A = Eigen::MatrixXd::Zero(0, k);
  prob.lb = Vector::Zero(0);
  prob.ub = Vector::Zero(0);
  prob.var_lb = Vector::Constant(k, -kInf);
  prob.var_ub = Vector::Constant(k, kInf);
  return prob;
}

void QpProblem::Validate() const {
  const Eigen::Index k = q.size();
  if (P.rows() != k || P.cols() != k || A.cols() != k ||
      lb.size() != A.rows() || ub.size() != A.rows() || var_lb.size() != k ||
      var_ub.size() != k) {
    throw Error(ErrorCode::kDimension, "QP dimensions are inconsistent");
  }
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInvalidInput, "QP matrix P is not symmetric");
  }
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (lb[i] > ub[i]) {
      throw Error(ErrorCode::kInvalidInput, "QP row bounds have lb > ub");
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (var_lb[j] > var_ub[j]) {
      throw Error(ErrorCode::kInvalidInput, "QP variable bounds have lb > ub");
    }
  }
  if (!P.allFinite() || !q.allFinite() || !A.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "QP data has non-finite entries");
  }
}

double QpProblem::Objective(const Vector& x) const {
  return 0.5 * x.dot(P * x) + q.dot(x);
}

namespace {

double InfNorm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Vector Clean(const Vector& bounds, double sign) {
  Vector out = bounds;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (IsInfinite(out[i])) out[i] = sign * kInf;
  }
  return out;
}

class AdmmSolver {
 public:
  AdmmSolver(const QpProblem& prob, const QpSettings& s)
      : prob_(prob), s_(s), k_(prob.num_vars()), p_(prob.num_rows()) {
    const int rows = p_ + k_;
    a_.resize(rows, k_);
    a_.topRows(p_) = prob.A;
    a_.bottomRows(k_).setIdentity();
    l_.resize(rows);
    u_.resize(rows);
    l_ << Clean(prob.lb, -1.0), Clean(prob.var_lb, -1.0);
    u_ << Clean(prob.ub, 1.0), Clean(prob.var_ub, 1.0);
    l_orig_ = l_;
    u_orig_ = u_;
    p_mat_ = prob.P;
    q_ = prob.q;
    d_ = Vector::Ones(k_);
    e_ = Vector::Ones(rows);
    if (s_.scaling) Scale();
    for (int i = 0; i < rows; ++i) {
      if (std::isfinite(l_[i])) l_[i] *= e_[i];
      if (std::isfinite(u_[i])) u_[i] *= e_[i];
    }
    rho_ = s_.rho;
    SetRhoVector();
  }

  QpSolution Solve(const std::optional<QpWarmStart>& warm) {
    const int rows = p_ + k_;
    x_ = Vector::Zero(k_);
    y_ = Vector::Zero(rows);
    if (warm && warm->x.size() == k_) {
      x_ = warm->x.cwiseQuotient(d_);
      Vector yu = Vector::Zero(rows);
      if (warm->y.size() == p_) yu.head(p_) = warm->y;
      if (warm->y_vars.size() == k_) yu.tail(k_) = warm->y_vars;
      y_ = c_ * yu.cwiseQuotient(e_);
    }
    z_ = Project(a_ * x_);
    Factor();

    QpSolution best;
    double polish_trigger = 1e-3;
    int iter = 0;
    for (; iter < s_.max_iter; ++iter) {
      const Vector rhs = s_.sigma * x_ - q_ + a_.transpose() * (rho_vec_.cwiseProduct(z_) - y_);
      const Vector xt = llt_.solve(rhs);
      const Vector zt = a_ * xt;
      const Vector x_new = s_.alpha * xt + (1.0 - s_.alpha) * x_;
      const Vector z_relax = s_.alpha * zt + (1.0 - s_.alpha) * z_;
      const Vector z_new = Project(z_relax + y_.cwiseQuotient(rho_vec_));
      const Vector y_new = y_ + rho_vec_.cwiseProduct(z_relax - z_new);
      delta_y_ = y_new - y_;
      x_ = x_new;
      z_ = z_new;
      y_ = y_new;
      s_.deadline.Charge(2.0 * rows * k_ + static_cast<double>(k_) * k_);

      if ((iter + 1) % s_.check_every != 0) continue;
      const Residuals r = ComputeResiduals(x_, z_, y_);
      if (r.prim <= r.eps_prim && r.dual <= r.eps_dual) {
        QpSolution sol = Extract(x_, y_, r, QpStatus::kSolved, iter + 1);
        if (s_.polish) {
          QpSolution pol;
          if (Polish(iter + 1, &pol) && pol.primal_residual <= sol.primal_residual &&
              pol.dual_residual <= std::max(sol.dual_residual, r.eps_dual)) {
            return pol;
          }
        }
        return sol;
      }
      if (IsPrimalInfeasible()) {
        QpSolution sol = Extract(x_, y_, r, QpStatus::kInfeasible, iter + 1);
        return sol;
      }
      if (s_.polish) {
        const double rp = r.prim / (1.0 + r.prim_scale);
        const double rd = r.dual / (1.0 + r.dual_scale);
        if (rp <= polish_trigger && rd <= polish_trigger) {
          QpSolution pol;
          if (Polish(iter + 1, &pol)) return pol;
          polish_trigger = std::max(polish_trigger * 0.1, 1e-12);
        }
      }
      if (s_.deadline.Expired()) {
        ++iter;
        break;
      }
      AdaptRho(iter + 1);
    }
    const Residuals r = ComputeResiduals(x_, z_, y_);
    QpSolution sol = Extract(x_, y_, r, QpStatus::kMaxIter, iter);
    if (s_.polish) {
      QpSolution pol;
      Polish(iter, &pol);
      if (pol.status == QpStatus::kSolved ||
          (pol.x.size() == k_ && pol.primal_residual <= sol.primal_residual &&
           pol.dual_residual <= sol.dual_residual)) {
        return pol;
      }
    }
    return sol;
  }

 private:
  struct Residuals {
    double prim, dual, eps_prim, eps_dual, prim_scale, dual_scale;
  };

  void Scale() {
    const int rows = p_ + k_;
    for (int it = 0; it < 15; ++it) {
      Vector dt(k_), et(rows);
      for (int j = 0; j < k_; ++j) {
        double nrm = std::max(p_mat_.col(j).cwiseAbs().maxCoeff(),
                              a_.col(j).cwiseAbs().maxCoeff());
        dt[j] = nrm < 1e-4 ? 1.0 : 1.0 / std::sqrt(std::min(nrm, 1e4));
      }
      for (int i = 0; i < rows; ++i) {
        double nrm = a_.row(i).cwiseAbs().maxCoeff();
        et[i] = nrm < 1e-4 ? 1.0 : 1.0 / std::sqrt(std::min(nrm, 1e4));
      }
      p_mat_ = dt.asDiagonal() * p_mat_ * dt.asDiagonal();
      a_ = et.asDiagonal() * a_ * dt.asDiagonal();
      q_ = dt.cwiseProduct(q_);
      d_ = d_.cwiseProduct(dt);
      e_ = e_.cwiseProduct(et);
      double mean_p = 0.0;
      for (int j = 0; j < k_; ++j) mean_p += p_mat_.col(j).cwiseAbs().maxCoeff();
      mean_p /= std::max(1, k_);
      double gamma = std::max(mean_p, InfNorm(q_));
      gamma = gamma < 1e-4 ? 1.0 : 1.0 / std::min(gamma, 1e4);
      p_mat_ *= gamma;
      q_ *= gamma;
      c_ *= gamma;
    }
    s_.deadline.Charge(15.0 * 3.0 * (p_ + 2.0 * k_) * k_);
  }

  void SetRhoVector() {
    const int rows = p_ + k_;
    rho_vec_.resize(rows);
    for (int i = 0; i < rows; ++i) {
      if (!std::isfinite(l_[i]) && !std::isfinite(u_[i])) {
        rho_vec_[i] = 1e-6;
      } else if (l_[i] == u_[i]) {
        rho_vec_[i] = 1e3 * rho_;
      } else {
        rho_vec_[i] = rho_;
      }
    }
  }

  void Factor() {
    Eigen::MatrixXd kkt = p_mat_;
    kkt.diagonal().array() += s_.sigma;
    kkt.noalias() += a_.transpose() * rho_vec_.asDiagonal() * a_;
    llt_.compute(kkt);
    if (llt_.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumerical, "ADMM system factorization failed");
    }
    s_.deadline.Charge(static_cast<double>(k_) * k_ * k_ / 3.0 +
                       static_cast<double>(p_ + k_) * k_ * k_);
  }

  Vector Project(const Vector& v) const {
    return v.cwiseMax(l_).cwiseMin(u_);
  }

  Residuals ComputeResiduals(const Vector& x, const Vector& z,
                             const Vector& y) const {
    Residuals r;
    const Vector ax = a_ * x;
    const Vector einv = e_.cwiseInverse();
    const Vector dinv = d_.cwiseInverse();
    r.prim = InfNorm(einv.cwiseProduct(ax - z));
    r.prim_scale = std::max(InfNorm(einv.cwiseProduct(ax)),
                            InfNorm(einv.cwiseProduct(z)));
    const Vector px = p_mat_ * x;
    const Vector aty = a_.transpose() * y;
    r.dual = InfNorm(dinv.cwiseProduct(px + q_ + aty)) / c_;
    r.dual_scale = std::max({InfNorm(dinv.cwiseProduct(px)),
                             InfNorm(dinv.cwiseProduct(aty)),
                             InfNorm(dinv.cwiseProduct(q_))}) /
                   c_;
    r.eps_prim = s_.eps_abs + s_.eps_rel * r.prim_scale;
    r.eps_dual = s_.eps_abs + s_.eps_rel * r.dual_scale;
    return r;
  }

  bool IsPrimalInfeasible() const {
    // Certificate in unscaled terms: dy = E * delta_y.
    const Vector dy = e_.cwiseProduct(delta_y_);
    const double nrm = InfNorm(dy);
    if (nrm < 1e-12) return false;
    const double tol = s_.eps_infeasible * nrm;
    const Vector aty = d_.cwiseInverse().cwiseProduct(a_.transpose() * delta_y_);
    if (InfNorm(aty) > tol) return false;
    double support = 0.0;
    for (Eigen::Index i = 0; i < dy.size(); ++i) {
      if (dy[i] > tol) {
        if (!std::isfinite(u_orig_[i])) return false;
        support += u_orig_[i] * dy[i];
      } else if (dy[i] < -tol) {
        if (!std::isfinite(l_orig_[i])) return false;
        support += l_orig_[i] * dy[i];
      }
    }
    return support < -tol;
  }

  // Step-size rebalancing from residuals measured in the scaled space.
  // Updates are spaced out and the spacing doubles after each one: every
  // update restarts the linear convergence, and residual ratios near the
  // solution oscillate enough to make a fixed schedule cycle.
  void AdaptRho(int iter) {
    if (iter - last_rho_update_ < rho_interval_) return;
    const Vector ax = a_ * x_;
    const Vector px = p_mat_ * x_;
    const Vector aty = a_.transpose() * y_;
    const double rp = InfNorm(ax - z_) /
                      std::max({InfNorm(ax), InfNorm(z_), 1e-10});
    const double rd = InfNorm(px + q_ + aty) /
                      std::max({InfNorm(px), InfNorm(aty), InfNorm(q_), 1e-10});
    if (rd <= 0.0 || rp <= 0.0) return;
    const double factor = std::sqrt(rp / rd);
    if (factor > std::sqrt(s_.rho_ratio) || factor < 1.0 / std::sqrt(s_.rho_ratio)) {
      rho_ = std::clamp(rho_ * factor, 1e-6, 1e6);
      last_rho_update_ = iter;
      rho_interval_ *= 2;
      SetRhoVector();
      Factor();
    }
  }

  QpSolution Extract(const Vector& xs, const Vector& ys, const Residuals& r,
                     QpStatus status, int iters) const {
    QpSolution sol;
    sol.x = d_.cwiseProduct(xs);
    const Vector yu = e_.cwiseProduct(ys) / c_;
    sol.y = yu.head(p_);
    sol.y_vars = yu.tail(k_);
    sol.objective = prob_.Objective(sol.x);
    sol.status = status;
    sol.primal_residual = r.prim;
    sol.dual_residual = r.dual;
    sol.iterations = iters;
    return sol;
  }

  // Solves the equality-constrained problem on the guessed active set and
  // accepts the result if it meets the termination tolerances with
  // multipliers of the right sign.
  bool Polish(int iters, QpSolution* out) {
    const int rows = p_ + k_;
    std::vector<int> act;
    std::vector<double> target;
    std::vector<int> side;  // -1 lower, +1 upper, 0 equality
    for (int i = 0; i < rows; ++i) {
      const bool eq = l_[i] == u_[i];
      const bool low = std::isfinite(l_[i]) && z_[i] - l_[i] < -y_[i];
      const bool up = std::isfinite(u_[i]) && u_[i] - z_[i] < y_[i];
      if (eq) {
        act.push_back(i);
        target.push_back(l_[i]);
        side.push_back(0);
      } else if (low) {
        act.push_back(i);
        target.push_back(l_[i]);
        side.push_back(-1);
      } else if (up) {
        act.push_back(i);
        target.push_back(u_[i]);
        side.push_back(1);
      }
    }
    const int na = static_cast<int>(act.size());
    const int dim = k_ + na;
    Eigen::MatrixXd kkt0 = Eigen::MatrixXd::Zero(dim, dim);
    kkt0.topLeftCorner(k_, k_) = p_mat_;
    for (int r = 0; r < na; ++r) {
      kkt0.block(k_ + r, 0, 1, k_) = a_.row(act[r]);
      kkt0.block(0, k_ + r, k_, 1) = a_.row(act[r]).transpose();
    }
    Eigen::MatrixXd kkt = kkt0;
    const double delta = 1e-7;
    kkt.diagonal().head(k_).array() += delta;
    kkt.diagonal().tail(na).array() -= delta;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
    Vector rhs(dim);
    rhs.head(k_) = -q_;
    for (int r = 0; r < na; ++r) rhs[k_ + r] = target[r];
    Vector sol = lu.solve(rhs);
    for (int it = 0; it < 5; ++it) {
      const Vector res = rhs - kkt0 * sol;
      sol += lu.solve(res);
    }
    s_.deadline.Charge(2.0 * dim * dim * dim / 3.0);
    if (!sol.allFinite()) return false;

    Vector x = sol.head(k_);
    Vector y = Vector::Zero(rows);
    const double ynorm = InfNorm(sol.tail(na));
    for (int r = 0; r < na; ++r) {
      double v = sol[k_ + r];
      const double tol = 1e-9 * (1.0 + ynorm);
      if ((side[r] < 0 && v > tol) || (side[r] > 0 && v < -tol)) {
        return false;
      }
      if (side[r] < 0) v = std::min(v, 0.0);
      if (side[r] > 0) v = std::max(v, 0.0);
      y[act[r]] = v;
    }
    const Vector z = Project(a_ * x);
    const Residuals r = ComputeResiduals(x, z, y);
    *out = Extract(x, y, r, QpStatus::kMaxIter, iters);
    out->polished = true;
    if (r.prim <= r.eps_prim && r.dual <= r.eps_dual) {
      out->status = QpStatus::kSolved;
      return true;
    }
    return false;
  }

  const QpProblem& prob_;
  QpSettings s_;
  int k_, p_;
  Eigen::MatrixXd a_, p_mat_;
  Vector q_, l_, u_, l_orig_, u_orig_, d_, e_;
  double c_ = 1.0;
  double rho_ = 0.1;
  int last_rho_update_ = 0;
  int rho_interval_ = 100;
  Vector rho_vec_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Vector x_, z_, y_, delta_y_;
};

}  // namespace

QpSolution SolveQp(const QpProblem& prob, const std::optional<QpWarmStart>& warm,
                   const QpSettings& settings) {
  prob.Validate();
  const int k = prob.num_vars();
  {
    Eigen::MatrixXd shifted = prob.P;
    shifted.diagonal().array() += 1e-6;
    Eigen::LLT<Eigen::MatrixXd> chol(shifted);
    if (chol.info() != Eigen::Success) {
      throw Error(ErrorCode::kInvalidInput,
                  "QP matrix P is not positive semidefinite");
    }
    settings.deadline.Charge(static_cast<double>(k) * k * k / 3.0);
  }
  if (k == 0) {
    QpSolution s;
    s.status = QpStatus::kSolved;
    s.primal_residual = s.dual_residual = 0.0;
    return s;
  }
  AdmmSolver solver(prob, settings);
  return solver.Solve(warm);
}

double LagrangianBound(const QpProblem& prob, const Vector& y_in) {
  const int k = prob.num_vars();
  const int p = prob.num_rows();
  if (y_in.size() != p) return -kInf;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j && prob.P(i, j) != 0.0) return -kInf;
    }
  }
  Vector y = y_in;
  double bound = 0.0;
  for (int i = 0; i < p; ++i) {
    if (y[i] > 0.0) {
      if (IsInfinite(prob.ub[i])) {
        y[i] = 0.0;
      } else {
        bound -= y[i] * prob.ub[i];
      }
    } else if (y[i] < 0.0) {
      if (IsInfinite(prob.lb[i])) {
        y[i] = 0.0;
      } else {
        bound -= y[i] * prob.lb[i];
      }
    }
  }
  const Vector c = prob.q + prob.A.transpose() * y;
  for (int j = 0; j < k; ++j) {
    const double lo = prob.var_lb[j], hi = prob.var_ub[j];
    const double pj = prob.P(j, j);
    const bool lo_inf = IsInfinite(lo), hi_inf = IsInfinite(hi);
    double best;
    if (pj > 0.0) {
      double t = -c[j] / pj;
      if (!lo_inf) t = std::max(t, lo);
      if (!hi_inf) t = std::min(t, hi);
      best = 0.5 * pj * t * t + c[j] * t;
    } else {
      if (c[j] > 0.0) {
        if (lo_inf) return -kInf;
        best = c[j] * lo;
      } else if (c[j] < 0.0) {
        if (hi_inf) return -kInf;
        best = c[j] * hi;
      } else {
        best = 0.0;
      }
    }
    bound += best;
  }
  return bound;
}

}  // namespace hmsvm
