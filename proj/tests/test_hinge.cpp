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
#include "hmsvm/hinge.hpp"
#include "hmsvm/mis.hpp"
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

// Minimum of the 1-D soft-margin objective on a (w, b) grid of step h over
// [-3, 3]^2. An upper bound on the true optimum, tight to O(h).
double HingeGrid(const Dataset& d, double C, double h = 0.005) {
  double best = kInf;
  for (double w = -3.0; w <= 3.0 + 1e-12; w += h) {
    for (double b = -3.0; b <= 3.0 + 1e-12; b += h) {
      double v = 0.5 * w * w;
      for (int i = 0; i < d.n(); ++i) {
        v += C * HingeLoss(d.label(i) * (w * d.row(i)[0] + b));
      }
      best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("hinge training on two points") {
  SUBCASE("symmetric pair") {
    const Dataset d = Line({-1, 1}, {-1, 1});
    const HingeResult r = TrainHinge(d, 1.0);
    CHECK(r.converged);
    CHECK(r.hyperplane.w[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r.hyperplane.b) <= 1e-6);
    CHECK(r.objective == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.objective <= HingeGrid(d, 1.0) + 1e-9);
  }
  SUBCASE("same label twice: w = 0 with b >= 1") {
    const Dataset d = Line({-1, 1}, {1, 1});
    const HingeResult r = TrainHinge(d, 1.0);
    CHECK(std::abs(r.hyperplane.w[0]) <= 1e-6);
    CHECK(r.hyperplane.b >= 1.0 - 1e-6);
    CHECK(r.xi.maxCoeff() <= 1e-6);
    CHECK(std::abs(r.objective) <= 1e-6);
    CHECK(r.objective <= HingeGrid(d, 1.0) + 1e-9);
  }
  SUBCASE("contradictory pair") {
    const Dataset d = Line({0, 0}, {1, -1});
    const HingeResult r = TrainHinge(d, 1.0);
    CHECK(std::abs(r.hyperplane.w[0]) <= 1e-6);
    CHECK(r.xi.sum() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.objective <= HingeGrid(d, 1.0) + 1e-9);
  }
}

TEST_CASE("hinge objective matches a grid search on random 1-D data") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = testing::RandomInstance(rng, 7, 1, 0.8);
    const double C = t % 2 ? 1.0 : 3.0;
    const HingeResult r = TrainHinge(d, C);
    const double grid = HingeGrid(d, C, 0.01);
    CAPTURE(t);
    CHECK(r.objective <= grid + 1e-7);
    // The grid optimum is within O(h) of the true optimum.
    CHECK(r.objective >= grid - 0.05 * (1.0 + grid));
  }
}

TEST_CASE("slacks are the hinge losses of the returned hyperplane") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = testing::RandomInstance(rng, 30, 3);
    const HingeResult r = TrainHinge(d, 10.0);
    const Vector u = Margins(d, r.hyperplane);
    for (int i = 0; i < d.n(); ++i) CHECK(r.xi[i] == HingeLoss(u[i]));
  }
}

TEST_CASE("incumbent derivation") {
  SUBCASE("slack ceiling clamped to one") {
    const Dataset d = Line({1.0, 0.7, -1.4}, {1, 1, 1});
    const Hyperplane h{Vector::Constant(1, 1.0), 0.0};
    Vector xi(3);
    xi << 0.0, 0.3, 2.4;
    const InitBounds b = DeriveIncumbent(d, h, xi, 2.0);
    CHECK(b.assignment == Assignment{{0, 1, 1}});
    CHECK(b.phi_ub == doctest::Approx(0.5 + 4.0));
    CHECK(b.w_ub == doctest::Approx(2.0 * std::sqrt(4.5)));
  }
  SUBCASE("separable data keeps every sample") {
    const Dataset d = Line({-1, 1}, {-1, 1});
    const HingeResult r = TrainHinge(d, 1.0);
    const InitBounds b = DeriveIncumbent(d, r.hyperplane, r.xi, 1.0);
    CHECK(b.assignment == Assignment::Zeros(2));
    CHECK(b.phi_ub == doctest::Approx(r.hyperplane.HalfNormSquared()));
    CHECK(b.w_ub == doctest::Approx(2.0 * std::sqrt(b.phi_ub)));
  }
  SUBCASE("contradictory pair") {
    const Dataset d = Line({0, 0}, {1, -1});
    const HingeResult r = TrainHinge(d, 1.0);
    const InitBounds b = DeriveIncumbent(d, r.hyperplane, r.xi, 1.0);
    CHECK(b.phi_ub == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.w_ub == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("tiny slacks do not mark a sample") {
    const Dataset d = Line({1.0}, {1});
    const InitBounds b = DeriveIncumbent(d, {Vector::Constant(1, 1.0), 0.0},
                                         Vector::Constant(1, 1e-12), 1.0);
    CHECK(b.assignment == Assignment::Zeros(1));
  }
  SUBCASE("tight box") {
    CHECK(WeightBound(8.0, false) == doctest::Approx(2.0 * std::sqrt(8.0)));
    CHECK(WeightBound(8.0, true) == doctest::Approx(4.0));
  }
}

TEST_CASE("incumbent is consistent and recomputed exactly") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Dataset d = testing::RandomInstance(rng, 25, 2 + t % 3);
    const double C = t % 2 ? 1.0 : 10.0;
    const HingeResult r = TrainHinge(d, C);
    const InitBounds b = DeriveIncumbent(d, r.hyperplane, r.xi, C);
    CHECK(b.phi_ub == HmlObjective(d, b.hyperplane, b.assignment, C));
    CHECK(b.w_ub == 2.0 * std::sqrt(b.phi_ub));
  }
}

TEST_CASE("cuts certified under the box are satisfied by the incumbent") {
  // The incumbent's objective bounds the optimum, so its own hyperplane
  // lies inside the box; an infeasible set under the box cannot be fully
  // kept by the incumbent.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coin(0, 1);
  int checked = 0;
  for (int t = 0; t < 30; ++t) {
    const Dataset d = testing::RandomInstance(rng, 20, 2);
    const HingeResult r = TrainHinge(d, 1.0);
    const InitBounds b = DeriveIncumbent(d, r.hyperplane, r.xi, 1.0);
    for (int s = 0; s < 10; ++s) {
      Subsystem sub{&d, {}, b.w_ub};
      for (int i = 0; i < d.n(); ++i) {
        if (coin(rng)) sub.indices.push_back(i);
      }
      if (sub.indices.empty() || IsFeasible(sub)) continue;
      const std::vector<int> mis = ExtractMis(sub);
      int covered = 0;
      for (int i : mis) covered += b.assignment[i];
      CHECK(covered >= 1);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("hard-margin training on a zero set") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const Dataset d = testing::RandomInstance(rng, 8, 2);
    std::vector<int> rows;
    for (int i = 0; i < d.n(); ++i) {
      if (i % 3 != 0) rows.push_back(i);
    }
    const double box = 4.0;
    const auto exact = testing::HardMarginByEnumeration(d, rows, box);
    const Subsystem sub{&d, rows, box};
    const auto got = IsFeasible(sub) ? TrainHardMargin(d, rows, box)
                                     : std::nullopt;
    CAPTURE(t);
    REQUIRE(exact.has_value() == got.has_value());
    if (!got) continue;
    const Vector u = Margins(d, *got);
    for (int i : rows) CHECK(u[i] >= 1.0 - 1e-9);
    CHECK(got->HalfNormSquared() ==
          doctest::Approx(exact->half_norm_sq).epsilon(1e-6).scale(1.0));
  }
}
