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


#include "hmsvm/report.hpp"

#include <vector>

#include "json.hpp"

namespace hmsvm {
namespace {

using nlohmann::ordered_json;

ordered_json Number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json ConfigJson(const SolverConfig& cfg) {
  ordered_json c;
  c["C"] = cfg.C;
  c["t_max"] = Number(cfg.t_max);
  c["t_s"] = Number(cfg.t_s);
  c["t_b"] = Number(cfg.t_b);
  c["feas_tol"] = cfg.feas_tol;
  c["opt_tol"] = cfg.opt_tol;
  c["seed"] = cfg.seed;
  c["big_m"] = cfg.big_m.mode == BigMPolicy::Mode::kFixed
                   ? ordered_json(cfg.big_m.value)
                   : ordered_json("derived");
  c["sample_size_cap"] = cfg.sample_size_cap;
  c["use_cuts"] = cfg.use_cuts;
  c["tight_wub"] = cfg.tight_wub;
  c["single_thread"] = cfg.single_thread;
  c["dominance_filter"] = cfg.dominance_filter;
  c["qp_warm_start"] = cfg.qp_warm_start;
  c["sampling_patience"] = cfg.sampling_patience;
  c["subset_node_cap"] = cfg.subset_node_cap;
  return c;
}

}  // namespace

std::string ReportJson(const Dataset& d, const SolverConfig& cfg,
                       const SolveReport& r, int indent) {
  ordered_json j;
  j["instance"] = d.name();
  j["n"] = d.n();
  j["m"] = d.m();
  j["C"] = cfg.C;
  j["status"] = ToString(r.status);
  j["objective"] = Number(r.upper_bound);
  j["lower_bound"] = Number(r.lower_bound);
  j["gap_percent"] = Number(r.gap_percent);
  j["cuts_generated"] = r.cuts_generated;
  j["nodes_explored"] = r.nodes_explored;
  j["time"] = {{"step1", r.elapsed.step1},
               {"step2", r.elapsed.step2},
               {"step3", r.elapsed.step3},
               {"total", r.elapsed.Total()}};
  j["seed"] = cfg.seed;
  j["config"] = ConfigJson(cfg);

  if (r.hyperplane.w.size() > 0) {
    j["w"] = std::vector<double>(r.hyperplane.w.data(),
                                 r.hyperplane.w.data() + r.hyperplane.w.size());
    j["b"] = Number(r.hyperplane.b);
  }
  std::vector<int> sacrificed;
  for (int i = 0; i < r.assignment.size(); ++i) {
    if (r.assignment[i]) sacrificed.push_back(i);
  }
  j["sacrificed"] = sacrificed;
  j["w_ub"] = Number(r.w_ub);
  j["b_ub"] = Number(r.b_ub);
  j["hinge_objective_bound"] = Number(r.phi_ub);
  j["root_bound"] = Number(r.root_bound);
  j["cuts_sampled"] = r.cuts_sampled;
  j["subsets_sampled"] = r.subsets_sampled;
  j["active_cuts"] = r.active_cuts;
  if (!r.message.empty()) j["message"] = r.message;
  return j.dump(indent);
}

int ExitCodeFor(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return 0;
    case SolveStatus::kTimeLimit:
      return 3;
    case SolveStatus::kInfeasibleInput:
      return 1;
    case SolveStatus::kError:
      return 2;
  }
  return 2;
}

}  // namespace hmsvm
