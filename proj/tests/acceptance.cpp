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


// Acceptance suite: one PASS/FAIL line per criterion. Criteria known to be
// unattainable are named with --expect-fail; the exit status is zero iff
// the failing set is exactly that list.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmsvm/bnb.hpp"
#include "hmsvm/data_io.hpp"
#include "hmsvm/hinge.hpp"
#include "hmsvm/log.hpp"
#include "hmsvm/mis.hpp"
#include "hmsvm/oracle.hpp"
#include "hmsvm/report.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace hmsvm;

namespace {

// Tolerances, pinned.
constexpr double kObjectiveRelTol = 1e-6;   // solver vs exhaustive optimum
constexpr double kHingeRelTol = 1e-6;       // default vs long-horizon hinge
constexpr double kBoxSlack = 1e-9;          // ||w*||_inf against w_ub
constexpr double kRootRelTol = 1e-6;        // root bound comparisons
// "Hit 0%": closed within the solver's optimality tolerance (relative
// 1e-6 of the objective, i.e. 1e-4 percent).
constexpr double kGapZero = 100.0 * 1e-6;


struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Dataset Synthetic(OutlierFamily family, int n, int m, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.family = family;
  spec.n = n;
  spec.m = m;
  spec.seed = seed;
  return GenerateSynthetic(spec);
}

Dataset Pair(double x) {
  RowMatrix f(2, 1);
  f << x, x;
  Vector y(2);
  y << 1, -1;
  return Dataset(f, y, "contradictory_pair");
}

// ---- shared small-instance suite ----

struct SmallRun {
  Dataset data;
  double C = 1.0;
  SolveReport report;
  OracleResult oracle;
};

SolverConfig SmallConfig(double C) {
  SolverConfig cfg;
  cfg.C = C;
  cfg.t_max = 60.0;
  cfg.t_s = 3.0;  // the command line's 5% share of t_max
  cfg.t_b = 3.0;
  cfg.single_thread = true;
  cfg.seed = 1;
  return cfg;
}

const std::vector<SmallRun>& SmallSuite() {
  static const std::vector<SmallRun> runs = [] {
    std::vector<SmallRun> out;
    std::mt19937_64 rng(20260101);
    for (int t = 0; t < 50; ++t) {
      const int n = 4 + t % 9;        // 4..12
      const int m = 1 + (t / 9) % 3;  // 1..3
      const double C = t % 2 ? 10.0 : 1.0;
      Dataset d = testing::RandomInstance(rng, n, m);
      SmallRun r{d, C, Solve(d, SmallConfig(C)), SolveByEnumeration(d, C)};
      out.push_back(std::move(r));
    }
    return out;
  }();
  return runs;
}

// ---- criteria ----

Outcome OracleEquivalence() {
  int optimal = 0, matching = 0;
  double worst = 0.0;
  for (const SmallRun& r : SmallSuite()) {
    optimal += r.report.status == SolveStatus::kOptimal;
    const double diff = std::abs(r.report.upper_bound - r.oracle.objective) /
                        std::max(1.0, std::abs(r.oracle.objective));
    worst = std::max(worst, diff);
    matching += diff <= kObjectiveRelTol;
  }
  const int total = static_cast<int>(SmallSuite().size());
  return {optimal == total && matching == total,
          Fmt("%d/%d Optimal, %d/%d within %.0e of the exhaustive optimum "
              "(worst %.1e)",
              optimal, total, matching, total, kObjectiveRelTol, worst)};
}

Outcome CutValidity() {
  long cuts = 0, violations = 0;
  for (const SmallRun& r : SmallSuite()) {
    for (const auto& cut : r.report.cuts) {
      ++cuts;
      for (const OracleOptimum& opt : r.oracle.optima) {
        const bool covered = std::any_of(cut.begin(), cut.end(), [&](int i) {
          return opt.assignment.z[i] != 0;
        });
        violations += !covered;
      }
    }
  }
  return {violations == 0,
          Fmt("%ld cuts checked against every exhaustive optimum, %ld "
              "violations",
              cuts, violations)};
}

Outcome MisMinimality() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(0.1, 5.0);
  int checked = 0, passed = 0, attempts = 0;
  while (checked < 200) {
    ++attempts;
    const int size = 3 + checked % 18;  // 3..20
    const int m = 1 + checked % 3;
    const Dataset d = testing::RandomInstance(rng, size, m, 0.5);
    std::vector<int> rows(size);
    for (int i = 0; i < size; ++i) rows[i] = i;
    const Subsystem sub{&d, rows, box(rng)};
    if (IsFeasible(sub)) continue;
    ++checked;
    const std::vector<int> mis = ExtractMis(sub);
    bool ok = !IsFeasible({&d, mis, sub.w_ub});
    for (std::size_t k = 0; ok && k < mis.size(); ++k) {
      std::vector<int> rest = mis;
      rest.erase(rest.begin() + k);
      ok = IsFeasible({&d, rest, sub.w_ub});
    }
    passed += ok;
  }
  return {passed == checked,
          Fmt("%d/%d extracted subsystems infeasible and irreducible "
              "(%d draws)",
              passed, checked, attempts)};
}

Outcome HingeQuality() {
  std::mt19937_64 rng(11);
  QpSettings precise;
  precise.max_iter = 10 * QpSettings{}.max_iter;
  precise.eps_abs = 1e-10;
  precise.eps_rel = 1e-10;
  // Without polishing the reference comes from plain iteration, not from the
  // same active-set solve that finishes the default run.
  precise.polish = false;
  int matching = 0, consistent = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 10 + (t * 7) % 41;  // 10..50
    const int m = 1 + t % 5;
    const double C = t % 3 == 0 ? 10.0 : 1.0;
    const Dataset d = testing::RandomInstance(rng, n, m);
    const HingeResult quick = TrainHinge(d, C);
    const HingeResult slow = TrainHinge(d, C, precise);
    const double diff = std::abs(quick.objective - slow.objective) /
                        std::max(1.0, std::abs(slow.objective));
    worst = std::max(worst, diff);
    matching += diff <= kHingeRelTol;
    try {
      const InitBounds init = DeriveIncumbent(d, quick.hyperplane, quick.xi, C);
      HmlObjective(d, init.hyperplane, init.assignment, C);
      ++consistent;
    } catch (const Error&) {
    }
  }
  int inside = 0;
  for (const SmallRun& r : SmallSuite()) {
    bool all = true;
    for (const OracleOptimum& opt : r.oracle.optima) {
      all &= opt.hyperplane.w.cwiseAbs().maxCoeff() <= r.oracle.w_ub + kBoxSlack;
    }
    inside += all;
  }
  const int small = static_cast<int>(SmallSuite().size());
  return {matching == 20 && consistent == 20 && inside == small,
          Fmt("hinge %d/20 within %.0e (worst %.1e), incumbents consistent "
              "%d/20, optima inside the box %d/%d",
              matching, kHingeRelTol, worst, consistent, inside, small)};
}

Outcome CutStrengthening(std::string* note) {
  int ok = 0;
  double worst = 0.0;
  for (const SmallRun& r : SmallSuite()) {
    SolverConfig plain = SmallConfig(r.C);
    plain.use_cuts = false;
    const SolveReport p = Solve(r.data, plain);
    const double slack = kRootRelTol * std::max(1.0, std::abs(p.root_bound));
    ok += r.report.root_bound >= p.root_bound - slack;
    worst = std::max(worst, p.root_bound - r.report.root_bound);
  }
  auto roots = [](const Dataset& d) {
    SolverConfig with = SmallConfig(1.0);
    SolverConfig without = with;
    without.use_cuts = false;
    return std::pair{Solve(d, with).root_bound, Solve(d, without).root_bound};
  };
  const auto [cut0, plain0] = roots(Pair(0.0));
  const auto [cut1, plain1] = roots(Pair(1.0));
  const bool strict = cut0 > plain0 + kRootRelTol * std::max(1.0, plain0);
  *note = Fmt("contradictory pair at x=0: root %.9g with cuts, %.9g without; "
              "same pair at x=1: %.9g with cuts, %.9g without",
              cut0, plain0, cut1, plain1);
  const int total = static_cast<int>(SmallSuite().size());
  return {ok == total && strict,
          Fmt("root with cuts >= without on %d/%d (largest shortfall %.1e); "
              "strict on the contradictory pair: %s",
              ok, total, worst, strict ? "yes" : "no")};
}

SolverConfig Reference(double C) {
  SolverConfig cfg;
  cfg.C = C;
  cfg.t_max = 600.0;
  cfg.t_s = 30.0;
  cfg.t_b = 30.0;
  cfg.single_thread = true;
  return cfg;
}

Outcome TypeAGrid() {
  int optimal = 0;
  double longest = 0.0;
  std::string failed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = Synthetic(OutlierFamily::kTypeA, 60, 2, seed);
    for (double C : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
      const auto start = std::chrono::steady_clock::now();
      const SolveReport r = Solve(d, Reference(C));
      longest = std::max(longest, std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - start)
                                      .count());
      if (r.status == SolveStatus::kOptimal) {
        ++optimal;
      } else {
        failed += Fmt(" %s/C=%g", d.name().c_str(), C);
      }
    }
  }
  return {optimal == 25,
          Fmt("%d/25 Optimal, longest run %.1f s wall%s%s", optimal, longest,
              failed.empty() ? "" : "; not optimal:", failed.c_str())};
}

std::string WithoutTiming(const Dataset& d, const SolverConfig& cfg,
                          const SolveReport& r) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(ReportJson(d, cfg, r));
  j.erase("time");
  return j.dump();
}

Outcome Determinism() {
  std::vector<std::pair<Dataset, SolverConfig>> cases;
  std::mt19937_64 rng(13);
  for (int t = 0; t < 4; ++t) {
    cases.emplace_back(testing::RandomInstance(rng, 8 + 2 * t, 1 + t % 3),
                       SmallConfig(t % 2 ? 10.0 : 1.0));
  }
  cases.emplace_back(Synthetic(OutlierFamily::kTypeB, 40, 3, 2), SmallConfig(10.0));
  SolverConfig short_budget = SmallConfig(1.0);
  short_budget.t_max = 2.0;
  short_budget.t_s = short_budget.t_b = 0.1;
  cases.emplace_back(Synthetic(OutlierFamily::kTypeA, 60, 2, 1), short_budget);
  int same = 0;
  for (const auto& [d, cfg] : cases) {
    same += WithoutTiming(d, cfg, Solve(d, cfg)) ==
            WithoutTiming(d, cfg, Solve(d, cfg));
  }
  const int total = static_cast<int>(cases.size());
  return {same == total,
          Fmt("%d/%d repeated single-thread solves gave identical reports "
              "apart from timing (one of them time-limited)",
              same, total)};
}

Outcome SamplingBudget() {
  double gap_cuts = 0.0, gap_plain = 0.0;
  int opt_cuts = 0, opt_plain = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = Synthetic(OutlierFamily::kTypeA, 100, 2, seed);
    SolverConfig with = Reference(100.0);
    SolverConfig without = with;
    without.t_s = without.t_b = 0.0;
    without.use_cuts = false;
    const SolveReport a = Solve(d, with);
    const SolveReport b = Solve(d, without);
    gap_cuts += a.gap_percent / 5.0;
    gap_plain += b.gap_percent / 5.0;
    opt_cuts += a.status == SolveStatus::kOptimal;
    opt_plain += b.status == SolveStatus::kOptimal;
  }
  const bool both_zero = gap_cuts <= kGapZero && gap_plain <= kGapZero;
  const bool pass = gap_cuts < gap_plain || both_zero;
  return {pass, Fmt("average gap %.2e%% with (30, 30) vs %.2e%% with (0, 0) "
                    "and no cuts; Optimal %d/5 vs %d/5%s",
                    gap_cuts, gap_plain, opt_cuts, opt_plain,
                    both_zero ? " (both 0%)" : "")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hmsvm acceptance suite"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "criteria to run (default all)")
      ->delimiter(',')
      ->check(CLI::Range(1, 8));
  app.add_option("--expect-fail", expect_fail,
                 "criteria known to be unattainable")
      ->delimiter(',')
      ->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7, 8};
  SetLogLevel(LogLevel::kError);

  std::string note5;
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1, {"oracle equivalence", OracleEquivalence}},
      {2, {"cut validity", CutValidity}},
      {3, {"MIS minimality", MisMinimality}},
      {4, {"hinge warm start", HingeQuality}},
      {5, {"cut strengthening", [&] { return CutStrengthening(&note5); }}},
      {6, {"Type-A n=60 grid", TypeAGrid}},
      {7, {"determinism", Determinism}},
      {8, {"sampling budget", SamplingBudget}},
  };
  std::set<int> failed;
  for (int id : std::set<int>(only.begin(), only.end())) {
    const auto& [name, run] = criteria.at(id);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %d [%s]: %s  %s  (%.1f s)\n", id, name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    if (id == 5 && !note5.empty()) std::printf("  note: %s\n", note5.c_str());
    std::fflush(stdout);
    if (!o.pass) failed.insert(id);
  }
  std::set<int> expected;
  for (int id : expect_fail) {
    if (std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
  }
  if (failed != expected) {
    std::printf("failing criteria differ from the expected set\n");
    return 1;
  }
  return 0;
}
