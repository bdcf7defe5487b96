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

#include "hmsvm/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <set>

#include "hmsvm/hinge.hpp"
#include "hmsvm/log.hpp"
#include "hmsvm/mis.hpp"

namespace hmsvm {

BigM DeriveBigM(const Dataset& d, double w_ub) {
  if (!(w_ub > 0.0)) {
    throw Error(ErrorCode::kInvalidInput, "big-M derivation needs w_ub > 0");
  }
  const Vector l1 = d.features().cwiseAbs().rowwise().sum();
  BigM out;
  out.b_ub = 1.0 + w_ub * l1.maxCoeff();
  out.M = (1.0 + out.b_ub + w_ub * l1.array()).matrix();
  return out;
}

NodeBox TightenBox(const Dataset& d, double w_ub, double ceiling, double C,
                   int fixed_ones, const BigMPolicy& policy) {
  const int n = d.n();
  NodeBox box;
  double radius = kInf;
  if (std::isfinite(ceiling)) {
    radius = std::sqrt(2.0 * std::max(0.0, ceiling - C * fixed_ones));
  }
  box.w_box = std::min(w_ub, radius);
  Vector reach(n);
  for (int i = 0; i < n; ++i) {
    // Skip the ball bound when it is infinite: inf * 0 would poison a zero row.
    reach[i] = box.w_box * d.row(i).cwiseAbs().sum();
    if (std::isfinite(radius)) reach[i] = std::min(reach[i], radius * d.row(i).norm());
  }
  box.b_box = 1.0 + (n > 0 ? reach.maxCoeff() : 0.0);
  if (policy.mode == BigMPolicy::Mode::kFixed) {
    box.M = Vector::Constant(n, policy.value);
  } else {
    box.M = (1.0 + box.b_box + reach.array()).matrix();
  }
  return box;
}

namespace {

// Variable and row layout of a node QP: [w, b, z_free], margin rows for
// every sample not fixed to one, then one covering row per cut with no
// member fixed to one.
struct NodeLayout {
  std::vector<int> free;       // sample per z column
  std::vector<int> col_of;     // sample -> z column or -1
  std::vector<int> zero;       // samples fixed to zero
  std::vector<int> margin;     // sample per margin row
  std::vector<int> cut_rows;   // cut position per covering row
  int ones = 0;
  bool contradiction = false;  // some cut lies inside the zero set
};

NodeLayout MakeLayout(int n, const std::vector<std::int8_t>& fix,
                      const std::vector<std::vector<int>>& cuts) {
  NodeLayout L;
  L.col_of.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (fix[i] == 1) {
      ++L.ones;
      continue;
    }
    L.margin.push_back(i);
    if (fix[i] == kFree) {
      L.col_of[i] = static_cast<int>(L.free.size());
      L.free.push_back(i);
    } else {
      L.zero.push_back(i);
    }
  }
  for (int c = 0; c < static_cast<int>(cuts.size()); ++c) {
    bool satisfied = false, has_free = false;
    for (int i : cuts[c]) {
      satisfied |= fix[i] == 1;
      has_free |= fix[i] == kFree;
    }
    if (satisfied) continue;
    if (!has_free) {
      L.contradiction = true;
      return L;
    }
    L.cut_rows.push_back(c);
  }
  return L;
}

}  // namespace

NodeRelaxation SolveNodeRelaxation(const Dataset& d,
                                   const std::vector<std::int8_t>& fix,
                                   const std::vector<std::vector<int>>& cuts,
                                   double C, const NodeBox& box,
                                   const QpSettings& settings,
                                   const std::optional<QpWarmStart>& warm,
                                   double feas_tol) {
  const int n = d.n(), m = d.m();
  if (static_cast<int>(fix.size()) != n) {
    throw Error(ErrorCode::kDimension, "fixing vector length differs from n");
  }
  NodeRelaxation out;
  const NodeLayout L = MakeLayout(n, fix, cuts);
  if (L.contradiction) {
    out.infeasible = true;
    return out;
  }
  if (!L.zero.empty()) {
    const Subsystem sub{&d, L.zero, box.w_box, box.b_box};
    const Deadline charge_only{settings.deadline.clock, kInf};
    if (!IsFeasible(sub, feas_tol, charge_only)) {
      out.infeasible = true;
      return out;
    }
  }

  const int nf = static_cast<int>(L.free.size());
  const int k = m + 1 + nf;
  const int rows = static_cast<int>(L.margin.size() + L.cut_rows.size());
  QpProblem prob;
  prob.P = Eigen::MatrixXd::Zero(k, k);
  prob.P.diagonal().head(m).setOnes();
  prob.q = Vector::Zero(k);
  prob.q.tail(nf).setConstant(C);
  prob.A = Eigen::MatrixXd::Zero(rows, k);
  prob.lb = Vector::Ones(rows);
  prob.ub = Vector::Constant(rows, kInf);
  int r = 0;
  for (int i : L.margin) {
    const double y = d.label(i);
    prob.A.row(r).head(m) = y * d.row(i);
    prob.A(r, m) = y;
    if (L.col_of[i] >= 0) prob.A(r, m + 1 + L.col_of[i]) = box.M[i];
    ++r;
  }
  for (int c : L.cut_rows) {
    for (int i : cuts[c]) {
      if (L.col_of[i] >= 0) prob.A(r, m + 1 + L.col_of[i]) = 1.0;
    }
    ++r;
  }
  prob.var_lb = Vector::Zero(k);
  prob.var_ub = Vector::Ones(k);
  prob.var_lb.head(m).setConstant(-box.w_box);
  prob.var_ub.head(m).setConstant(box.w_box);
  prob.var_lb[m] = -box.b_box;
  prob.var_ub[m] = box.b_box;

  out.qp = SolveQp(prob, warm, settings);
  const double offset = C * L.ones;
  out.value = out.qp.objective + offset;
  const double lagrangian = LagrangianBound(prob, out.qp.y);
  out.bound = std::max(offset, std::isfinite(lagrangian) ? lagrangian + offset
                                                         : -kInf);
  out.hyperplane.w = out.qp.x.head(m);
  out.hyperplane.b = out.qp.x[m];
  out.z = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (fix[i] == 1) out.z[i] = 1.0;
    if (L.col_of[i] >= 0) {
      out.z[i] = std::clamp(out.qp.x[m + 1 + L.col_of[i]], 0.0, 1.0);
    }
  }
  return out;
}

std::vector<int> ViolatedCuts(const Assignment& z, const std::vector<Cut>& cuts) {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(cuts.size()); ++c) {
    const auto& s = cuts[c].members;
    if (std::none_of(s.begin(), s.end(), [&](int i) { return z[i] != 0; })) {
      out.push_back(c);
    }
  }
  return out;
}

namespace {

constexpr double kIntTol = 1e-6;
constexpr std::size_t kCutsPerRound = 25;

// Node solution kept in full-problem coordinates so that it can seed the
// children's QPs whatever they fix.
struct GlobalIterate {
  Vector x;                    // [w, b, z_0..z_{n-1}]
  Vector y_vars;               // same layout
  Vector y_margin;             // per sample
  std::vector<double> y_cut;   // per active cut
};

struct Node {
  std::vector<std::int8_t> fix;
  double bound = 0.0;
  int depth = 0;
  long id = 0;
  std::shared_ptr<const GlobalIterate> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id < b.id;  // newer first among equal bounds
  }
};

class Tree {
 public:
  Tree(const Dataset& d, const SolverConfig& cfg, double w_ub,
       const CutPool& pool, const Deadline& deadline)
      : d_(d), cfg_(cfg), w_ub_(w_ub), pool_(pool), deadline_(deadline),
        is_active_(pool.size(), false) {
    settings_.eps_abs = 1e-7;
    settings_.eps_rel = 1e-7;
    settings_.max_iter = 4000;
    settings_.deadline = deadline;
  }

  TreeResult Run(const Hyperplane& h0, const Assignment& z0) {
    const int n = d_.n();
    best_h_ = h0;
    best_z_ = z0;
    upper_ = HmlObjective(d_, h0, z0, cfg_.C, cfg_.feas_tol);
    TryLeaf(z0);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{std::vector<std::int8_t>(n, kFree), 0.0, 0, next_id_++, {}});
    double pruned_min = kInf;
    bool root_done = false;
    TreeResult res;
    while (!open.empty()) {
      if (deadline_.Expired()) {
        HMSVM_LOG(kInfo, "tree search stopped by the time limit with "
                             << open.size() << " open nodes");
        break;
      }
      Node node = open.top();
      open.pop();
      if (Prunable(node.bound)) {
        pruned_min = std::min(pruned_min, node.bound);
        continue;
      }
      ++res.nodes;
      const NodeBox box = TightenBox(d_, w_ub_, upper_, cfg_.C,
                                     CountOnes(node.fix), cfg_.big_m);
      std::shared_ptr<const GlobalIterate> warm = node.warm;
      NodeRelaxation rel;
      double bound = node.bound;
      while (true) {
        rel = SolveNodeRelaxation(d_, node.fix, active_, cfg_.C, box,
                                  settings_, LocalWarm(node.fix, warm.get()),
                                  cfg_.feas_tol);
        if (rel.infeasible) break;
        bound = std::max(bound, rel.bound);
        HMSVM_LOG(kDebug, "node " << node.id << " qp status " << static_cast<int>(rel.qp.status) << " iters " << rel.qp.iterations << " value " << rel.value << " bound " << rel.bound << " active " << active_.size());
        RoundingHeuristic(rel.hyperplane);
        // Map the iterate before the active set grows: it indexes rows by
        // the cuts it was solved with.
        auto iterate = ToGlobal(node.fix, rel);
        if (!ActivateViolated(rel.z)) break;
        warm = std::move(iterate);
      }
      if (!root_done) {
        res.root_bound = rel.infeasible ? upper_ : bound;
        root_done = true;
      }
      if (rel.infeasible) continue;
      if (Prunable(bound)) {
        pruned_min = std::min(pruned_min, bound);
        continue;
      }

      int branch = -1;
      double best_frac = kIntTol;
      for (int i = 0; i < n; ++i) {
        if (node.fix[i] != kFree) continue;
        const double frac = std::min(rel.z[i], 1.0 - rel.z[i]);
        if (frac > best_frac) {
          best_frac = frac;
          branch = i;
        }
      }
      if (branch < 0) {
        // Integral relaxation: its z is a candidate in its own right.
        Assignment cand = Assignment::Zeros(n);
        for (int i = 0; i < n; ++i) cand.z[i] = rel.z[i] > 0.5 ? 1 : 0;
        if (ViolatedCuts(cand, pool_.cuts()).empty()) TryLeaf(cand);
        if (Prunable(bound)) {
          pruned_min = std::min(pruned_min, bound);
          continue;
        }
        // The relaxation is not yet accurate enough to close the node;
        // keep splitting on the least settled free variable.
        best_frac = -1.0;
        for (int i = 0; i < n; ++i) {
          if (node.fix[i] != kFree) continue;
          const double frac = std::min(rel.z[i], 1.0 - rel.z[i]);
          if (frac > best_frac) {
            best_frac = frac;
            branch = i;
          }
        }
        if (branch < 0) {
          pruned_min = std::min(pruned_min, bound);
          continue;
        }
      }
      auto iterate = ToGlobal(node.fix, rel);
      for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
        Node child;
        child.fix = node.fix;
        child.fix[branch] = v;
        child.bound = bound;
        child.depth = node.depth + 1;
        child.id = next_id_++;
        child.warm = cfg_.qp_warm_start ? iterate : nullptr;
        open.push(std::move(child));
      }
    }

    double lower = std::min(upper_, pruned_min);
    res.finished = open.empty();
    if (!open.empty()) lower = std::min(lower, open.top().bound);
    if (!root_done) res.root_bound = 0.0;
    res.hyperplane = best_h_;
    res.assignment = best_z_;
    res.upper_bound = upper_;
    res.lower_bound = lower;
    res.active_cuts = static_cast<long>(active_.size());
    return res;
  }

 private:
  bool Prunable(double bound) const {
    return bound >= upper_ - cfg_.opt_tol * std::abs(upper_);
  }

  static int CountOnes(const std::vector<std::int8_t>& fix) {
    return static_cast<int>(std::count(fix.begin(), fix.end(), 1));
  }

  // Samples within feas_tol of the margin count as kept, matching the
  // consistency check; leaf hyperplanes sit exactly on it up to rounding.
  void Offer(const Hyperplane& h) {
    const Vector u = Margins(d_, h);
    Assignment z = Assignment::Zeros(d_.n());
    for (int i = 0; i < d_.n(); ++i) z.z[i] = u[i] < 1.0 - cfg_.feas_tol;
    const double obj = HmlObjective(d_, h, z, cfg_.C, cfg_.feas_tol);
    if (obj < upper_) {
      HMSVM_LOG(kDebug, "incumbent " << upper_ << " -> " << obj);
      upper_ = obj;
      best_h_ = h;
      best_z_ = z;
    }
  }

  // Minimum-norm hyperplane keeping every z_i = 0 sample outside the
  // margin; each zero set is tried once.
  void TryLeaf(const Assignment& z) {
    if (cfg_.C * z.Count() >= upper_ - cfg_.opt_tol * std::abs(upper_)) return;
    if (!tried_.insert(z.z).second) return;
    std::vector<int> rows;
    for (int i = 0; i < z.size(); ++i) {
      if (z[i] == 0) rows.push_back(i);
    }
    if (!rows.empty()) {
      const Subsystem sub{&d_, rows, kInf};
      const Deadline charge_only{deadline_.clock, kInf};
      if (!IsFeasible(sub, cfg_.feas_tol, charge_only)) return;
    }
    QpSettings s;
    s.deadline = Deadline{deadline_.clock, kInf};
    if (auto h = TrainHardMargin(d_, rows, kInf, s)) Offer(*h);
  }

  void RoundingHeuristic(const Hyperplane& h) {
    if (!h.IsFinite()) return;
    Offer(h);
    TryLeaf(AssignmentFromMargins(Margins(d_, h)));
  }

  // Activates the most violated inactive pool cuts at z, at most
  // kCutsPerRound of them; ties go to the older cut.
  bool ActivateViolated(const Vector& z) {
    const auto& cuts = pool_.cuts();
    std::vector<std::pair<double, int>> violated;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      if (is_active_[c]) continue;
      double sum = 0.0;
      for (int i : cuts[c].members) sum += z[i];
      if (sum < 1.0 - kIntTol) violated.emplace_back(sum, static_cast<int>(c));
    }
    if (violated.empty()) return false;
    const std::size_t take = std::min<std::size_t>(violated.size(), kCutsPerRound);
    std::partial_sort(violated.begin(), violated.begin() + take, violated.end());
    for (std::size_t t = 0; t < take; ++t) {
      const int c = violated[t].second;
      is_active_[c] = true;
      active_.push_back(cuts[c].members);
    }
    return true;
  }

  std::shared_ptr<const GlobalIterate> ToGlobal(
      const std::vector<std::int8_t>& fix, const NodeRelaxation& rel) const {
    const int n = d_.n(), m = d_.m();
    const NodeLayout L = MakeLayout(n, fix, active_);
    auto g = std::make_shared<GlobalIterate>();
    g->x = Vector::Zero(m + 1 + n);
    g->y_vars = Vector::Zero(m + 1 + n);
    g->x.head(m + 1) = rel.qp.x.head(m + 1);
    g->y_vars.head(m + 1) = rel.qp.y_vars.head(m + 1);
    for (int i = 0; i < n; ++i) {
      g->x[m + 1 + i] = rel.z[i];
      if (L.col_of[i] >= 0) {
        g->y_vars[m + 1 + i] = rel.qp.y_vars[m + 1 + L.col_of[i]];
      }
    }
    g->y_margin = Vector::Zero(n);
    int r = 0;
    for (int i : L.margin) g->y_margin[i] = rel.qp.y[r++];
    g->y_cut.assign(active_.size(), 0.0);
    for (int c : L.cut_rows) g->y_cut[c] = rel.qp.y[r++];
    return g;
  }

  std::optional<QpWarmStart> LocalWarm(const std::vector<std::int8_t>& fix,
                                       const GlobalIterate* g) const {
    if (g == nullptr) return std::nullopt;
    const int n = d_.n(), m = d_.m();
    const NodeLayout L = MakeLayout(n, fix, active_);
    if (L.contradiction) return std::nullopt;
    const int nf = static_cast<int>(L.free.size());
    QpWarmStart w;
    w.x.resize(m + 1 + nf);
    w.y_vars.resize(m + 1 + nf);
    w.x.head(m + 1) = g->x.head(m + 1);
    w.y_vars.head(m + 1) = g->y_vars.head(m + 1);
    for (int t = 0; t < nf; ++t) {
      w.x[m + 1 + t] = g->x[m + 1 + L.free[t]];
      w.y_vars[m + 1 + t] = g->y_vars[m + 1 + L.free[t]];
    }
    w.y.resize(static_cast<Eigen::Index>(L.margin.size() + L.cut_rows.size()));
    int r = 0;
    for (int i : L.margin) w.y[r++] = g->y_margin[i];
    for (int c : L.cut_rows) {
      w.y[r++] = c < static_cast<int>(g->y_cut.size()) ? g->y_cut[c] : 0.0;
    }
    return w;
  }

  const Dataset& d_;
  const SolverConfig& cfg_;
  double w_ub_;
  const CutPool& pool_;
  Deadline deadline_;
  QpSettings settings_;
  std::vector<bool> is_active_;
  std::vector<std::vector<int>> active_;
  std::set<std::vector<std::uint8_t>> tried_;
  double upper_ = kInf;
  Hyperplane best_h_;
  Assignment best_z_;
  long next_id_ = 0;
};

}  // namespace

TreeResult RunBranchAndBound(const Dataset& d, const SolverConfig& cfg,
                             double w_ub, const Hyperplane& incumbent_h,
                             const Assignment& incumbent_z,
                             const CutPool& pool, const Deadline& deadline) {
  Tree tree(d, cfg, w_ub, pool, deadline);
  return tree.Run(incumbent_h, incumbent_z);
}

SolveReport Solve(const Dataset& d, const SolverConfig& cfg) {
  cfg.Validate();
  SolveReport report;
  Stopwatch clock(cfg.single_thread);
  const Deadline total = Deadline::After(clock, cfg.t_max);
  try {
    QpSettings hinge_settings;
    hinge_settings.deadline = total;
    const HingeResult hinge = TrainHinge(d, cfg.C, hinge_settings);
    const InitBounds init = DeriveIncumbent(d, hinge.hyperplane, hinge.xi,
                                            cfg.C, cfg.feas_tol, cfg.tight_wub);
    report.elapsed.step1 = clock.Elapsed();
    report.hyperplane = init.hyperplane;
    report.assignment = init.assignment;
    report.upper_bound = init.phi_ub;
    report.phi_ub = init.phi_ub;
    report.w_ub = init.w_ub;
    report.lower_bound = 0.0;
    if (init.phi_ub == 0.0) {
      report.b_ub = 1.0;
      report.gap_percent = 0.0;
      report.status = SolveStatus::kOptimal;
      return report;
    }
    report.b_ub = DeriveBigM(d, init.w_ub).b_ub;
    if (total.Expired()) {
      report.gap_percent = RelativeGap(report.upper_bound, report.lower_bound);
      report.status = SolveStatus::kTimeLimit;
      report.message = "time limit reached during the hinge warm start";
      return report;
    }

    CutPool pool(cfg.dominance_filter);
    if (cfg.use_cuts) {
      const double t0 = clock.Elapsed();
      const SamplingStats sampled = RunSamplingPhase(
          d, init.w_ub, cfg, pool, total.Sooner(cfg.t_s));
      report.subsets_sampled = sampled.subsets;
      report.cuts_sampled = static_cast<long>(pool.size());
      RunFullPhase(d, init.w_ub, cfg, pool, total.Sooner(cfg.t_b));
      report.elapsed.step2 = clock.Elapsed() - t0;
    }
    report.cuts_generated = static_cast<long>(pool.size());
    for (const Cut& c : pool.cuts()) report.cuts.push_back(c.members);

    const double t1 = clock.Elapsed();
    const TreeResult tree = RunBranchAndBound(
        d, cfg, init.w_ub, init.hyperplane, init.assignment, pool, total);
    report.elapsed.step3 = clock.Elapsed() - t1;
    report.hyperplane = tree.hyperplane;
    report.assignment = tree.assignment;
    report.upper_bound = tree.upper_bound;
    report.lower_bound = tree.lower_bound;
    report.root_bound = tree.root_bound;
    report.nodes_explored = tree.nodes;
    report.active_cuts = tree.active_cuts;
    report.gap_percent = RelativeGap(report.upper_bound, report.lower_bound);
    report.status = tree.finished && report.gap_percent <= 100.0 * cfg.opt_tol
                        ? SolveStatus::kOptimal
                        : SolveStatus::kTimeLimit;
  } catch (const Error& e) {
    report.status = SolveStatus::kError;
    report.message = e.what();
  }
  return report;
}

}  // namespace hmsvm
