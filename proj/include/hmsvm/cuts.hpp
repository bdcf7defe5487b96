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

// Covering cuts  sum_{i in S} z_i >= 1  harvested from minimal infeasible
// margin subsystems, and the set-covering master search that produces them.

#ifndef HMSVM_CUTS_HPP_
#define HMSVM_CUTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hmsvm/clock.hpp"
#include "hmsvm/model.hpp"

namespace hmsvm {

enum class CutOrigin { kSampled, kFull };

struct Cut {
  std::vector<int> members;  // sorted, unique
  CutOrigin origin = CutOrigin::kFull;
  long subset_id = -1;  // sampled cuts only
  double created = 0.0;  // seconds on the solve clock
};

// Insertion-ordered, duplicate-free collection of cuts. With dominance
// filtering a cut is rejected when some pooled cut is a subset of it, and
// inserting a cut evicts every pooled strict superset.
class CutPool {
 public:
  explicit CutPool(bool dominance = true) : dominance_(dominance) {}

  bool Add(std::vector<int> members, CutOrigin origin = CutOrigin::kFull,
           long subset_id = -1, double created = 0.0);

  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  bool dominance() const { return dominance_; }
  bool Contains(const std::vector<int>& members) const;

  // Header "n=<n> w_ub=<17 digits>", then one cut per line as sorted
  // 0-based indices separated by spaces.
  void Save(const std::string& path, int n, double w_ub) const;
  static CutPool Load(const std::string& path, int* n, double* w_ub,
                      bool dominance = true);

 private:
  bool dominance_;
  std::vector<Cut> cuts_;
};

// Fixing state of one binary in a master or tree node.
inline constexpr std::int8_t kFree = -1;

struct MasterLpResult {
  bool infeasible = false;
  double value = 0.0;  // min sum z over the LP relaxation
  Vector z;
};

// LP relaxation of  min sum z  s.t. the cuts, z in [0,1], with the fixings
// in `fix` (kFree, 0 or 1 per variable).
MasterLpResult SolveMasterLp(int n, const std::vector<std::int8_t>& fix,
                             const std::vector<Cut>& cuts,
                             const Deadline& deadline = Deadline::Never());

struct SeparationOptions {
  double feas_tol = kDefaultFeasTol;
  double z_zero_tol = 1e-6;
  Deadline deadline;  // charged, and checked between rounds
};

struct SeparationResult {
  bool infeasible = false;
  bool interrupted = false;
  double value = 0.0;
  Vector z;  // local indexing
  std::vector<std::vector<int>> new_cuts;  // local indexing
};

// One master node: solve the LP, collect the near-zero z, and if their
// margin rows (under the weight box) are infeasible add the MIS as a cut
// and repeat. `sample` maps local positions to dataset rows; `pool` is in
// local indexing and receives the new cuts.
SeparationResult SeparateAtNode(const Dataset& d, const std::vector<int>& sample,
                                double w_ub, const std::vector<std::int8_t>& fix,
                                CutPool& pool,
                                const SeparationOptions& options = {});

struct MasterSearchStats {
  long nodes = 0;
  long cuts_added = 0;
  bool exhausted = false;
  double best_integer = kInf;
};

// Depth-first branch-and-cut on the master over `sample`: zero branch
// first, most fractional variable with lowest-index ties. node_cap <= 0
// means no cap.
MasterSearchStats RunMasterSearch(const Dataset& d,
                                  const std::vector<int>& sample, double w_ub,
                                  CutPool& pool, long node_cap,
                                  const SeparationOptions& options);

struct SamplingStats {
  long subsets = 0;
  long cuts_inserted = 0;
  bool saturated = false;
};

// Subset `id` of size r drawn without replacement, sorted. Depends only on
// (n, r, seed, id).
std::vector<int> DrawSubset(int n, int r, std::uint64_t seed, long id);

// Sampled harvesting: random subsets, each searched from an empty local
// pool with a node cap, merged into `pool` in subset order. Runs until the
// deadline or, when patience > 0, until that many consecutive subsets add
// nothing new.
SamplingStats RunSamplingPhase(const Dataset& d, double w_ub,
                               const SolverConfig& cfg, CutPool& pool,
                               const Deadline& deadline);

// Master search over all samples, hot-started from `pool`, until the tree
// is exhausted or the deadline passes. Returns the number of cuts added.
MasterSearchStats RunFullPhase(const Dataset& d, double w_ub,
                               const SolverConfig& cfg, CutPool& pool,
                               const Deadline& deadline);

}  // namespace hmsvm

#endif  // HMSVM_CUTS_HPP_
