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
#include "hmsvm/bnb.hpp"
#include "hmsvm/hinge.hpp"
#include "oracles.hpp"

using namespace hmsvm;

namespace {

Dataset Line(std::vector<double> xs, std::vector<double> ys) {
  RowMatrix x(static_cast<int>(xs.size()), 1);
  Vector y(static_cast<int>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x(i, 0) = xs[i];
    y[i] = ys[i];
  }
  return Dataset(x, y);
}

SolverConfig Quick(double C) {
  SolverConfig cfg;
  cfg.C = C;
  cfg.t_max = 30.0;
  cfg.t_s = 2.0;
  cfg.t_b = 2.0;
  cfg.single_thread = true;
  cfg.seed = 3;
  return cfg;
}

NodeBox Box(const Dataset& d, double w_ub, double C) {
  return TightenBox(d, w_ub, kInf, C, 0, BigMPolicy{});
}

// Objective within the solver's optimality tolerance of the reference.
void CheckObjective(double got, double want) {
  CHECK(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)));
}

}  // namespace

TEST_CASE("big-M derivation") {
  const Dataset one = Line({1.0}, {1});
  const BigM a = DeriveBigM(one, 2.0);
  CHECK(a.b_ub == 3.0);
  CHECK(a.M[0] == 6.0);

  const Dataset zeros = Line({0.0, 0.0}, {1, -1});
  const BigM z = DeriveBigM(zeros, 5.0);
  CHECK(z.b_ub == 1.0);
  CHECK(z.M[0] == 2.0);
  CHECK(z.M[1] == 2.0);

  CHECK_THROWS_AS(DeriveBigM(one, 0.0), Error);

  // Safety: every point of the box keeps 1 - u_i within M_i.
  std::mt19937_64 rng(53);
  const Dataset d = testing::RandomInstance(rng, 12, 3);
  const double w_ub = 1.7;
  const BigM bm = DeriveBigM(d, w_ub);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    Hyperplane h{Vector(3), bm.b_ub * unit(rng)};
    for (int j = 0; j < 3; ++j) h.w[j] = w_ub * (t % 2 ? (unit(rng) > 0 ? 1 : -1) : unit(rng));
    const Vector u = Margins(d, h);
    for (int i = 0; i < d.n(); ++i) CHECK(1.0 - u[i] <= bm.M[i] + 1e-12);
  }
}

TEST_CASE("tightened box never exceeds the derived one") {
  std::mt19937_64 rng(59);
  const Dataset d = testing::RandomInstance(rng, 10, 2);
  const BigM bm = DeriveBigM(d, 3.0);
  const NodeBox open = Box(d, 3.0, 1.0);
  CHECK(open.w_box == 3.0);
  CHECK(open.b_box == doctest::Approx(bm.b_ub));
  for (double ceiling : {0.5, 2.0, 4.5, 100.0}) {
    const NodeBox b = TightenBox(d, 3.0, ceiling, 1.0, 0, BigMPolicy{});
    CHECK(b.w_box <= 3.0);
    CHECK(b.w_box <= std::sqrt(2.0 * ceiling) + 1e-12);
    CHECK(b.b_box <= bm.b_ub + 1e-12);
    for (int i = 0; i < d.n(); ++i) CHECK(b.M[i] <= bm.M[i] + 1e-12);
  }
  BigMPolicy fixed{BigMPolicy::Mode::kFixed, 50.0};
  const NodeBox f = TightenBox(d, 3.0, kInf, 1.0, 0, fixed);
  for (int i = 0; i < d.n(); ++i) CHECK(f.M[i] == 50.0);
}

TEST_CASE("node relaxation examples") {
  SUBCASE("everything sacrificed") {
    std::mt19937_64 rng(61);
    const Dataset d = testing::RandomInstance(rng, 6, 2);
    const std::vector<std::int8_t> fix(6, 1);
    const auto r = SolveNodeRelaxation(d, fix, {}, 2.5, Box(d, 1.0, 2.5));
    REQUIRE_FALSE(r.infeasible);
    CHECK(r.value == doctest::Approx(15.0).epsilon(1e-6));
    CHECK(r.bound <= r.value + 1e-9);
  }
  SUBCASE("contradictory pair with its cut") {
    const Dataset d = Line({0, 0}, {1, -1});
    const std::vector<std::int8_t> fix(2, kFree);
    const auto r = SolveNodeRelaxation(d, fix, {{0, 1}}, 1.0, Box(d, 1.0, 1.0));
    REQUIRE_FALSE(r.infeasible);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.bound == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.z.sum() == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("separable pair") {
    const Dataset d = Line({1, -1}, {1, -1});
    const std::vector<std::int8_t> fix(2, kFree);
    const auto r = SolveNodeRelaxation(d, fix, {}, 10.0, Box(d, 2.0, 10.0));
    REQUIRE_FALSE(r.infeasible);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::abs(r.hyperplane.w[0] - 1.0) < 1e-4);
    CHECK(r.bound <= r.value + 1e-9);
    CHECK(r.bound == doctest::Approx(0.5).epsilon(1e-4));
  }
  SUBCASE("infeasible fixings") {
    const Dataset d = Line({0, 0}, {1, -1});
    const std::vector<std::int8_t> fix(2, 0);
    CHECK(SolveNodeRelaxation(d, fix, {}, 1.0, Box(d, 1.0, 1.0)).infeasible);
    const std::vector<std::int8_t> half = {0, kFree};
    const auto r = SolveNodeRelaxation(d, half, {{0}}, 1.0, Box(d, 1.0, 1.0));
    CHECK(r.infeasible);
  }
}

TEST_CASE("node bounds never exceed the enumerated optimum") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 12; ++t) {
    const Dataset d = testing::RandomInstance(rng, 6, 1 + t % 2);
    const double C = t % 3 == 0 ? 10.0 : 1.0;
    const auto hinge = TrainHinge(d, C);
    const double w_ub = DeriveIncumbent(d, hinge.hyperplane, hinge.xi, C, kDefaultFeasTol, false).w_ub;
    const auto exact = testing::HmlByEnumeration(d, C, w_ub);
    const std::vector<std::int8_t> fix(d.n(), kFree);
    const auto r = SolveNodeRelaxation(d, fix, {}, C, Box(d, w_ub, C));
    CAPTURE(t);
    REQUIRE_FALSE(r.infeasible);
    CHECK(r.bound <= exact.objective + 1e-7);
  }
}

TEST_CASE("violated cuts") {
  Assignment z = Assignment::Zeros(3);
  z.z[0] = 1;
  std::vector<Cut> cuts = {Cut{{0, 1}}, Cut{{1, 2}}, Cut{{2}}, Cut{{0}}};
  CHECK(ViolatedCuts(z, cuts) == std::vector<int>{1, 2});
  CHECK(ViolatedCuts(z, {}).empty());
}

TEST_CASE("solver examples") {
  SUBCASE("contradictory pair") {
    const auto r = Solve(Line({0, 0}, {1, -1}), Quick(1.0));
    CHECK(r.status == SolveStatus::kOptimal);
    CheckObjective(r.upper_bound, 1.0);
    CHECK(r.assignment.Count() == 1);
  }
  SUBCASE("separable pair") {
    const auto r = Solve(Line({1, -1}, {1, -1}), Quick(10.0));
    CHECK(r.status == SolveStatus::kOptimal);
    CheckObjective(r.upper_bound, 0.5);
    CHECK(r.assignment.Count() == 0);
    CHECK(std::abs(r.hyperplane.w[0] - 1.0) < 1e-5);
    CHECK(std::abs(r.hyperplane.b) < 1e-5);
  }
  SUBCASE("small random instance against enumeration") {
    std::mt19937_64 rng(71);
    const Dataset d = testing::RandomInstance(rng, 8, 2);
    const auto r = Solve(d, Quick(10.0));
    REQUIRE(r.status == SolveStatus::kOptimal);
    const auto exact = testing::HmlByEnumeration(d, 10.0, r.w_ub);
    CheckObjective(r.upper_bound, exact.objective);
  }
}

TEST_CASE("solver properties on random instances") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 10; ++t) {
    const int n = 6 + t % 4;
    const Dataset d = testing::RandomInstance(rng, n, 1 + t % 3);
    const double C = t % 2 ? 1.0 : 10.0;
    SolverConfig cfg = Quick(C);
    const auto r = Solve(d, cfg);
    CAPTURE(t);
    REQUIRE(r.status == SolveStatus::kOptimal);
    const auto exact = testing::HmlByEnumeration(d, C, r.w_ub);

    // Soundness: the bracket holds the optimum and the incumbent is real.
    CHECK(r.lower_bound <= exact.objective + 1e-6 * std::max(1.0, exact.objective));
    CHECK(r.upper_bound >= exact.objective - 1e-6 * std::max(1.0, exact.objective));
    CHECK(HmlObjective(d, r.hyperplane, r.assignment, C) ==
          doctest::Approx(r.upper_bound).epsilon(1e-12));
    CHECK(r.root_bound <= r.upper_bound + 1e-9);
    CHECK(r.lower_bound >= r.root_bound - 1e-9);
    CHECK(r.upper_bound <= r.phi_ub + 1e-9);

    // Configuration switches change the path, not the answer.
    SolverConfig no_cuts = cfg;
    no_cuts.use_cuts = false;
    SolverConfig cold = cfg;
    cold.qp_warm_start = false;
    SolverConfig tight = cfg;
    tight.tight_wub = true;
    SolverConfig big = cfg;
    big.big_m = {BigMPolicy::Mode::kFixed, 1e3};
    for (const SolverConfig& variant : {no_cuts, cold, tight, big}) {
      const auto v = Solve(d, variant);
      REQUIRE(v.status == SolveStatus::kOptimal);
      CheckObjective(v.upper_bound, r.upper_bound);
    }

    // Same configuration, same run.
    const auto again = Solve(d, cfg);
    CHECK(again.upper_bound == r.upper_bound);
    CHECK(again.nodes_explored == r.nodes_explored);
    CHECK(again.cuts_generated == r.cuts_generated);
  }
}

TEST_CASE("degenerate inputs") {
  SUBCASE("one class") {
    const auto r = Solve(Line({1, 2, 3}, {1, 1, 1}), Quick(1.0));
    CHECK(r.status == SolveStatus::kOptimal);
    CheckObjective(r.upper_bound, 0.0);
  }
  SUBCASE("time budget of zero") {
    std::mt19937_64 rng(79);
    SolverConfig cfg = Quick(1.0);
    cfg.t_max = 0.0;
    cfg.t_s = 0.0;
    cfg.t_b = 0.0;
    const Dataset d = testing::RandomInstance(rng, 10, 2);
    const auto r = Solve(d, cfg);
    CHECK((r.status == SolveStatus::kTimeLimit || r.status == SolveStatus::kOptimal));
    CHECK(std::isfinite(r.upper_bound));
    CHECK(r.lower_bound <= r.upper_bound);
  }
}
