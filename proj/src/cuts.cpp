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

#include "hmsvm/cuts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "hmsvm/log.hpp"
#include "hmsvm/mis.hpp"
#include "hmsvm/simplex.hpp"

namespace hmsvm {

bool CutPool::Add(std::vector<int> members, CutOrigin origin, long subset_id,
                  double created) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidInput, "a cut needs at least one member");
  }
  for (const Cut& c : cuts_) {
    if (c.members == members) return false;
    if (dominance_ && std::includes(members.begin(), members.end(),
                                    c.members.begin(), c.members.end())) {
      return false;
    }
  }
  if (dominance_) {
    std::erase_if(cuts_, [&](const Cut& c) {
      return std::includes(c.members.begin(), c.members.end(), members.begin(),
                           members.end());
    });
  }
  cuts_.push_back(Cut{std::move(members), origin, subset_id, created});
  return true;
}

bool CutPool::Contains(const std::vector<int>& members) const {
  std::vector<int> key = members;
  std::sort(key.begin(), key.end());
  return std::any_of(cuts_.begin(), cuts_.end(),
                     [&](const Cut& c) { return c.members == key; });
}

void CutPool::Save(const std::string& path, int n, double w_ub) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write cut pool to " + path);
  out << "n=" << n << " w_ub=" << std::setprecision(17) << w_ub << '\n';
  for (const Cut& c : cuts_) {
    for (std::size_t t = 0; t < c.members.size(); ++t) {
      out << (t ? " " : "") << c.members[t];
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing cut pool to " + path);
}

CutPool CutPool::Load(const std::string& path, int* n, double* w_ub,
                      bool dominance) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open cut pool " + path);
  std::string line;
  int count = 0;
  double box = 0.0;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "n=%d w_ub=%lf", &count, &box) != 2) {
    throw Error(ErrorCode::kParse, path + ": bad cut pool header");
  }
  CutPool pool(dominance);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> members;
    int v;
    while (ss >> v) {
      if (v < 0 || v >= count) {
        throw Error(ErrorCode::kParse, path + ":" + std::to_string(lineno) +
                                           ": cut index out of range");
      }
      members.push_back(v);
    }
    if (!ss.eof()) {
      throw Error(ErrorCode::kParse,
                  path + ":" + std::to_string(lineno) + ": malformed cut");
    }
    if (!members.empty()) pool.Add(std::move(members));
  }
  if (n) *n = count;
  if (w_ub) *w_ub = box;
  return pool;
}

// The relaxation is solved through its dual, which has one row per free
// variable:
//
//   min  -sum mu_c + sum nu_i
//   s.t. sum_{c : i in c} mu_c - nu_i + s_i = 1,   mu, nu, s >= 0.
//
// The primal z_i is minus the multiplier of row i.
MasterLpResult SolveMasterLp(int n, const std::vector<std::int8_t>& fix,
                             const std::vector<Cut>& cuts,
                             const Deadline& deadline) {
  MasterLpResult out;
  out.z = Vector::Zero(n);
  std::vector<int> row_of(n, -1);
  int rows = 0;
  double fixed_ones = 0.0;
  for (int i = 0; i < n; ++i) {
    if (fix[i] == kFree) {
      row_of[i] = rows++;
    } else if (fix[i] == 1) {
      out.z[i] = 1.0;
      fixed_ones += 1.0;
    }
  }
  LpProblem lp;
  lp.num_rows = rows;
  lp.rhs.assign(rows, 1.0);
  for (const Cut& c : cuts) {
    SparseColumn col;
    bool satisfied = false;
    for (int i : c.members) {
      if (fix[i] == 1) satisfied = true;
      if (fix[i] == kFree) {
        col.rows.push_back(row_of[i]);
        col.values.push_back(1.0);
      }
    }
    if (satisfied) continue;
    if (col.rows.empty()) {
      out.infeasible = true;
      return out;
    }
    lp.AddColumn(-1.0, 0.0, kInf, std::move(col));
  }
  out.value = fixed_ones;
  if (rows == 0 || lp.num_cols() == 0) return out;
  for (int r = 0; r < rows; ++r) {
    lp.AddColumn(1.0, 0.0, kInf, SparseColumn{{r}, {-1.0}});
    lp.AddColumn(0.0, 0.0, kInf, SparseColumn{{r}, {1.0}});
  }
  LpOptions options;
  options.deadline = deadline;
  const LpResult r = SolveLp(lp, options);
  if (r.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNumerical, "master LP did not reach optimality");
  }
  for (int i = 0; i < n; ++i) {
    if (row_of[i] >= 0) {
      out.z[i] = std::clamp(-r.row_duals[row_of[i]], 0.0, 1.0);
    }
  }
  out.value = fixed_ones - r.objective;
  return out;
}

SeparationResult SeparateAtNode(const Dataset& d, const std::vector<int>& sample,
                                double w_ub, const std::vector<std::int8_t>& fix,
                                CutPool& pool,
                                const SeparationOptions& options) {
  const int n = static_cast<int>(sample.size());
  // Feasibility solves are charged to the clock but never cut short.
  const Deadline charge_only{options.deadline.clock, kInf};
  SeparationResult out;
  while (true) {
    const MasterLpResult lp = SolveMasterLp(n, fix, pool.cuts(), charge_only);
    if (lp.infeasible) {
      out.infeasible = true;
      return out;
    }
    out.value = lp.value;
    out.z = lp.z;
    Subsystem sub{&d, {}, w_ub};
    for (int i = 0; i < n; ++i) {
      if (lp.z[i] <= options.z_zero_tol) sub.indices.push_back(sample[i]);
    }
    if (IsFeasible(sub, options.feas_tol, charge_only)) return out;
    const std::vector<int> mis = ExtractMis(sub, options.feas_tol, charge_only);
    std::vector<int> local;
    local.reserve(mis.size());
    for (int g : mis) {
      local.push_back(static_cast<int>(
          std::lower_bound(sample.begin(), sample.end(), g) - sample.begin()));
    }
    if (!pool.Add(local, CutOrigin::kFull, -1,
                  options.deadline.clock ? options.deadline.clock->Elapsed()
                                         : 0.0)) {
      // Cannot happen for a correct LP: the new cut is violated by z.
      throw Error(ErrorCode::kInternal, "separated cut already in the pool");
    }
    out.new_cuts.push_back(std::move(local));
    if (options.deadline.Expired()) {
      out.interrupted = true;
      return out;
    }
  }
}

MasterSearchStats RunMasterSearch(const Dataset& d,
                                  const std::vector<int>& sample, double w_ub,
                                  CutPool& pool, long node_cap,
                                  const SeparationOptions& options) {
  const int n = static_cast<int>(sample.size());
  if (!std::is_sorted(sample.begin(), sample.end())) {
    throw Error(ErrorCode::kInvalidInput, "master sample must be sorted");
  }
  MasterSearchStats stats;
  std::vector<std::vector<std::int8_t>> stack;
  stack.emplace_back(n, kFree);
  while (!stack.empty()) {
    if ((node_cap > 0 && stats.nodes >= node_cap) ||
        options.deadline.Expired()) {
      return stats;
    }
    std::vector<std::int8_t> fix = std::move(stack.back());
    stack.pop_back();
    ++stats.nodes;
    const SeparationResult sep = SeparateAtNode(d, sample, w_ub, fix, pool, options);
    stats.cuts_added += static_cast<long>(sep.new_cuts.size());
    if (sep.infeasible) continue;
    if (sep.interrupted) return stats;
    if (std::ceil(sep.value - 1e-9) >= stats.best_integer) continue;

    int branch = -1;
    double best_frac = options.z_zero_tol;
    for (int i = 0; i < n; ++i) {
      if (fix[i] != kFree) continue;
      const double frac = std::min(sep.z[i], 1.0 - sep.z[i]);
      if (frac > best_frac) {
        best_frac = frac;
        branch = i;
      }
    }
    if (branch < 0) {
      stats.best_integer = std::min(stats.best_integer, std::round(sep.value));
      continue;
    }
    std::vector<std::int8_t> one = fix;
    one[branch] = 1;
    fix[branch] = 0;
    stack.push_back(std::move(one));
    stack.push_back(std::move(fix));
  }
  stats.exhausted = true;
  return stats;
}

std::vector<int> DrawSubset(int n, int r, std::uint64_t seed, long id) {
  // SplitMix64 finalizer decorrelates neighbouring (seed, id) pairs.
  std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(id + 1);
  s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ULL;
  s = (s ^ (s >> 27)) * 0x94D049BB133111EBULL;
  s ^= s >> 31;
  std::mt19937_64 rng(s);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int t = 0; t < r; ++t) {
    std::uniform_int_distribution<int> pick(t, n - 1);
    std::swap(perm[t], perm[pick(rng)]);
  }
  perm.resize(r);
  std::sort(perm.begin(), perm.end());
  return perm;
}

namespace {

std::vector<std::vector<int>> HarvestSubset(const Dataset& d, double w_ub,
                                            const SolverConfig& cfg, long id,
                                            const Deadline& deadline) {
  const int r = std::min(d.n() / 2, cfg.sample_size_cap);
  const std::vector<int> sample = DrawSubset(d.n(), r, cfg.seed, id);
  CutPool local(cfg.dominance_filter);
  SeparationOptions options;
  options.feas_tol = cfg.feas_tol;
  options.deadline = deadline;
  RunMasterSearch(d, sample, w_ub, local, cfg.subset_node_cap, options);
  std::vector<std::vector<int>> out;
  for (const Cut& c : local.cuts()) {
    std::vector<int> global;
    for (int i : c.members) global.push_back(sample[i]);
    out.push_back(std::move(global));
  }
  return out;
}

}  // namespace

SamplingStats RunSamplingPhase(const Dataset& d, double w_ub,
                               const SolverConfig& cfg, CutPool& pool,
                               const Deadline& deadline) {
  SamplingStats stats;
  const int r = std::min(d.n() / 2, cfg.sample_size_cap);
  if (r < 1 || deadline.Remaining() <= 0.0) return stats;
  int workers = cfg.single_thread ? 1
                : cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(workers, 1);
  long idle = 0;
  long id = 0;
  while (!deadline.Expired()) {
    std::vector<std::vector<std::vector<int>>> harvested(workers);
    if (workers == 1) {
      harvested[0] = HarvestSubset(d, w_ub, cfg, id, deadline);
    } else {
      std::vector<std::thread> threads;
      std::vector<std::exception_ptr> errors(workers);
      for (int t = 0; t < workers; ++t) {
        threads.emplace_back([&, t] {
          try {
            harvested[t] = HarvestSubset(d, w_ub, cfg, id + t, deadline);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : threads) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    const double now = deadline.clock ? deadline.clock->Elapsed() : 0.0;
    for (int t = 0; t < workers; ++t, ++id) {
      long inserted = 0;
      for (auto& cut : harvested[t]) {
        inserted += pool.Add(std::move(cut), CutOrigin::kSampled, id, now);
      }
      ++stats.subsets;
      stats.cuts_inserted += inserted;
      idle = inserted > 0 ? 0 : idle + 1;
      if (cfg.sampling_patience > 0 && idle >= cfg.sampling_patience) {
        stats.saturated = true;
        HMSVM_LOG(kInfo, "sampling saturated after " << stats.subsets
                             << " subsets, " << pool.size() << " cuts");
        return stats;
      }
    }
  }
  return stats;
}

MasterSearchStats RunFullPhase(const Dataset& d, double w_ub,
                               const SolverConfig& cfg, CutPool& pool,
                               const Deadline& deadline) {
  MasterSearchStats stats;
  if (deadline.Remaining() <= 0.0) return stats;
  std::vector<int> all(d.n());
  for (int i = 0; i < d.n(); ++i) all[i] = i;
  SeparationOptions options;
  options.feas_tol = cfg.feas_tol;
  options.deadline = deadline;
  return RunMasterSearch(d, all, w_ub, pool, 0, options);
}

}  // namespace hmsvm
