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

#include <random>

#include "doctest.h"
#include "hmsvm/feasibility.hpp"
#include "hmsvm/qp.hpp"
#include "hmsvm/simplex.hpp"

using namespace hmsvm;

namespace {

QpProblem OneDim(double lb, double ub) {
  QpProblem p = QpProblem::Unconstrained(Eigen::MatrixXd::Identity(1, 1),
                                         Vector::Zero(1));
  p.A = Eigen::MatrixXd::Ones(1, 1);
  p.lb = Vector::Constant(1, lb);
  p.ub = Vector::Constant(1, ub);
  return p;
}

// Brute force over active sets: every optimum of a strictly convex QP is the
// equality-constrained minimizer for its own active set, so the smallest
// objective among feasible candidates is the optimum.
double ActiveSetOracle(const QpProblem& prob) {
  const int k = prob.num_vars();
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> lo, hi;
  for (int i = 0; i < prob.num_rows(); ++i) {
    rows.push_back(prob.A.row(i));
    lo.push_back(prob.lb[i]);
    hi.push_back(prob.ub[i]);
  }
  for (int j = 0; j < k; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(k);
    e[j] = 1.0;
    rows.push_back(e);
    lo.push_back(prob.var_lb[j]);
    hi.push_back(prob.var_ub[j]);
  }
  const int r = static_cast<int>(rows.size());
  double best = kInf;
  std::vector<int> state(r, 0);  // 0 inactive, 1 at lower, 2 at upper
  while (true) {
    std::vector<int> act;
    std::vector<double> tgt;
    bool ok = true;
    for (int i = 0; i < r && ok; ++i) {
      if (state[i] == 0) continue;
      double v = state[i] == 1 ? lo[i] : hi[i];
      if (IsInfinite(v)) ok = false;
      act.push_back(i);
      tgt.push_back(v);
    }
    if (ok && static_cast<int>(act.size()) <= k) {
      const int a = static_cast<int>(act.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + a, k + a);
      kkt.topLeftCorner(k, k) = prob.P;
      Vector rhs(k + a);
      rhs.head(k) = -prob.q;
      for (int t = 0; t < a; ++t) {
        kkt.block(k + t, 0, 1, k) = rows[act[t]];
        kkt.block(0, k + t, k, 1) = rows[act[t]].transpose();
        rhs[k + t] = tgt[t];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
      if (lu.isInvertible()) {
        Vector x = lu.solve(rhs).head(k);
        bool feas = true;
        for (int i = 0; i < r; ++i) {
          double v = rows[i].dot(x);
          if (v < lo[i] - 1e-9 || v > hi[i] + 1e-9) feas = false;
        }
        if (feas) best = std::min(best, prob.Objective(x));
      }
    }
    int pos = 0;
    while (pos < r && state[pos] == 2) state[pos++] = 0;
    if (pos == r) break;
    ++state[pos];
  }
  return best;
}

QpProblem RandomQp(std::mt19937_64& rng, int k, int p, bool boxed) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.1, 1.5);
  Eigen::MatrixXd l(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) l(i, j) = g(rng);
  QpProblem prob;
  prob.P = l * l.transpose() + 0.1 * Eigen::MatrixXd::Identity(k, k);
  prob.q.resize(k);
  for (int j = 0; j < k; ++j) prob.q[j] = 3.0 * g(rng);
  Vector x0(k);
  for (int j = 0; j < k; ++j) x0[j] = g(rng);
  prob.A.resize(p, k);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < k; ++j) prob.A(i, j) = g(rng);
  Vector ax = prob.A * x0;
  prob.lb.resize(p);
  prob.ub.resize(p);
  for (int i = 0; i < p; ++i) {
    prob.lb[i] = (i % 3 == 2) ? -kInf : ax[i] - u(rng);
    prob.ub[i] = (i % 3 == 1) ? kInf : ax[i] + u(rng);
  }
  prob.var_lb = Vector::Constant(k, -kInf);
  prob.var_ub = Vector::Constant(k, kInf);
  if (boxed) {
    for (int j = 0; j < k; ++j) {
      prob.var_lb[j] = x0[j] - u(rng);
      prob.var_ub[j] = x0[j] + u(rng);
    }
  }
  return prob;
}

}  // namespace

TEST_CASE("simplex solves a small bounded LP") {
  // min -x - y  s.t. x + 2y + s = 4, 0 <= x <= 3, y >= 0, s >= 0.
  LpProblem lp;
  lp.num_rows = 1;
  lp.rhs = {4.0};
  lp.AddColumn(-1.0, 0.0, 3.0, {{0}, {1.0}});
  lp.AddColumn(-1.0, 0.0, kInf, {{0}, {2.0}});
  lp.AddColumn(0.0, 0.0, kInf, {{0}, {1.0}});
  LpResult r = SolveLp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(-3.5));
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.x[1] == doctest::Approx(0.5));
}

TEST_CASE("simplex reports infeasible and unbounded programs") {
  LpProblem infeasible;
  infeasible.num_rows = 1;
  infeasible.rhs = {-1.0};
  infeasible.AddColumn(1.0, 0.0, kInf, {{0}, {1.0}});
  CHECK(SolveLp(infeasible).status == LpStatus::kInfeasible);

  LpProblem unbounded;
  unbounded.num_rows = 1;
  unbounded.rhs = {0.0};
  unbounded.AddColumn(-1.0, 0.0, kInf, {{0}, {1.0}});
  unbounded.AddColumn(0.0, 0.0, kInf, {{0}, {-1.0}});
  CHECK(SolveLp(unbounded).status == LpStatus::kUnbounded);
}

TEST_CASE("min-slack feasibility examples") {
  SUBCASE("single row with a free variable") {
    RowMatrix a(1, 1);
    a << 1.0;
    SlackResult r = MinSlackFeasibility(a, Vector::Constant(1, 1.0),
                                        Vector::Constant(1, -kInf),
                                        Vector::Constant(1, kInf));
    CHECK(r.slack_total == doctest::Approx(0.0));
    CHECK(r.witness[0] == doctest::Approx(1.0));
  }
  SUBCASE("contradictory pair") {
    RowMatrix a(2, 1);
    a << 1.0, -1.0;
    SlackResult r = MinSlackFeasibility(a, Vector::Constant(2, 1.0),
                                        Vector::Constant(1, -kInf),
                                        Vector::Constant(1, kInf));
    CHECK(r.slack_total == doctest::Approx(2.0));
  }
  SUBCASE("bound-clipped row") {
    RowMatrix a(1, 1);
    a << 1.0;
    SlackResult r = MinSlackFeasibility(a, Vector::Constant(1, 2.0),
                                        Vector::Constant(1, -kInf),
                                        Vector::Constant(1, 1.0));
    CHECK(r.slack_total == doctest::Approx(1.0));
    CHECK(r.witness[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("min-slack is zero on systems built around a known point") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 5, p = 1 + trial % 13;
    Vector x(k);
    for (int j = 0; j < k; ++j) x[j] = g(rng);
    RowMatrix a(p, k);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = g(rng);
    Vector d = a * x;
    for (int i = 0; i < p; ++i) d[i] -= u(rng) * (trial % 2);
    Vector lo = x.array() - 1.0, hi = x.array() + 1.0;
    SlackResult r = MinSlackFeasibility(a, d, lo, hi);
    CHECK(r.slack_total <= 1e-9);
    Vector res = a * r.witness - d;
    CHECK(res.minCoeff() >= -1e-8);
  }
}

TEST_CASE("QP projection onto a half-line") {
  QpSolution s = SolveQp(OneDim(3.0, kInf));
  REQUIRE(s.status == QpStatus::kSolved);
  CHECK(s.x[0] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(s.objective == doctest::Approx(4.5).epsilon(1e-8));
}

TEST_CASE("QP detects an empty feasible set") {
  QpProblem p = OneDim(0.0, 0.0);
  p.A = Eigen::MatrixXd(2, 1);
  p.A << 1.0, 1.0;
  p.lb = Vector(2);
  p.ub = Vector(2);
  p.lb << 1.0, -kInf;
  p.ub << kInf, 0.0;
  QpSettings s;
  s.polish = false;
  CHECK(SolveQp(p, std::nullopt, s).status == QpStatus::kInfeasible);
}

TEST_CASE("QP rejects an indefinite matrix") {
  QpProblem p = OneDim(0.0, 1.0);
  p.P(0, 0) = -1.0;
  CHECK_THROWS_AS(SolveQp(p), Error);
}

TEST_CASE("QP matches the active-set oracle on random strictly convex problems") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 6;
    const int p = trial % 11;
    QpProblem prob = RandomQp(rng, k, p, trial % 2 == 1);
    const double oracle = ActiveSetOracle(prob);
    QpSolution s = SolveQp(prob);
    INFO("trial " << trial);
    REQUIRE(s.status == QpStatus::kSolved);
    CHECK(std::abs(s.objective - oracle) <=
          1e-5 * std::max(1.0, std::abs(oracle)));

    // Stationarity and complementary slackness from the returned multipliers.
    Vector grad = prob.P * s.x + prob.q + prob.A.transpose() * s.y + s.y_vars;
    CHECK(grad.cwiseAbs().maxCoeff() <=
          1e-6 * std::max(1.0, prob.q.cwiseAbs().maxCoeff()));
    Vector ax = prob.A * s.x;
    for (int i = 0; i < p; ++i) {
      double comp = 0.0;
      if (s.y[i] < 0) comp = std::abs(s.y[i] * (ax[i] - prob.lb[i]));
      if (s.y[i] > 0) comp = std::abs(s.y[i] * (prob.ub[i] - ax[i]));
      CHECK(comp <= 1e-6);
    }

    // Warm starts do not move the answer.
    QpSolution w = SolveQp(prob, QpWarmStart{s.x, s.y, s.y_vars});
    REQUIRE(w.status == QpStatus::kSolved);
    CHECK(std::abs(w.objective - s.objective) <=
          1e-8 * std::max(1.0, std::abs(s.objective)));
  }
}

TEST_CASE("Lagrangian bound never exceeds the optimum") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 4, p = 1 + trial % 5;
    QpProblem prob = RandomQp(rng, k, p, true);
    Vector diag = prob.P.diagonal();
    prob.P = diag.asDiagonal();
    const double oracle = ActiveSetOracle(prob);
    QpSolution s = SolveQp(prob);
    REQUIRE(s.status == QpStatus::kSolved);
    const double at_opt = LagrangianBound(prob, s.y);
    CHECK(at_opt <= oracle + 1e-9 * std::max(1.0, std::abs(oracle)));
    CHECK(at_opt >= oracle - 1e-5 * std::max(1.0, std::abs(oracle)));
    Vector junk(p);
    for (int i = 0; i < p; ++i) junk[i] = 5.0 * g(rng);
    CHECK(LagrangianBound(prob, junk) <= oracle + 1e-9);
  }
}
