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


#include "hmsvm/oracle.hpp"

#include <bit>
#include <cstdint>

#include "hmsvm/hinge.hpp"
#include "hmsvm/log.hpp"
#include "hmsvm/mis.hpp"

namespace hmsvm {
namespace {

constexpr double kTieTol = 1e-9;

// Next larger integer with the same number of set bits.
std::uint32_t NextCombination(std::uint32_t v) {
  const std::uint32_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

bool Ties(double a, double b) {
  return std::abs(a - b) <= kTieTol * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

OracleResult SolveByEnumeration(const Dataset& d, double C, bool tight_wub,
                                double feas_tol) {
  const int n = d.n();
  if (n > kOracleMaxSamples) {
    throw Error(ErrorCode::kTooLarge,
                "exhaustive search refuses n = " + std::to_string(n) +
                    " (limit " + std::to_string(kOracleMaxSamples) + ")");
  }
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw Error(ErrorCode::kInvalidInput, "C must be positive and finite");
  }
  const HingeResult hinge = TrainHinge(d, C);
  const InitBounds init =
      DeriveIncumbent(d, hinge.hyperplane, hinge.xi, C, feas_tol, tight_wub);

  OracleResult out;
  out.w_ub = init.w_ub;
  if (init.phi_ub == 0.0) {  // only possible with no samples to satisfy
    out.objective = 0.0;
    out.optima.push_back({init.assignment, init.hyperplane, 0.0});
    return out;
  }
  // The hinge incumbent caps the search; it is not itself an answer.
  double ceiling = init.phi_ub * (1.0 + 1e-6) + 1e-9;

  for (int k = 0; k <= n; ++k) {
    if (C * k > std::min(ceiling, out.objective) * (1.0 + kTieTol)) break;
    const std::uint64_t end = std::uint64_t{1} << n;
    std::uint32_t mask = k == 0 ? 0u : (1u << k) - 1u;
    for (; mask < end; mask = k == 0 ? static_cast<std::uint32_t>(end)
                                     : NextCombination(mask)) {
      Subsystem sub{&d, {}, init.w_ub};
      Assignment z = Assignment::Zeros(n);
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1u) {
          z.z[i] = 1;
        } else {
          sub.indices.push_back(i);
        }
      }
      ++out.assignments_checked;
      if (!sub.indices.empty() && !IsFeasible(sub, feas_tol)) continue;
      std::optional<Hyperplane> h = Hyperplane::Zero(d.m());
      if (!sub.indices.empty()) h = TrainHardMargin(d, sub.indices, init.w_ub);
      if (!h) {
        HMSVM_LOG(kWarn, "oracle: feasible zero set without a hyperplane");
        continue;
      }
      const double value = h->HalfNormSquared() + C * k;
      if (out.optima.empty() || (value < out.objective && !Ties(value, out.objective))) {
        out.optima.clear();
        out.objective = value;
        out.optima.push_back({std::move(z), *h, value});
      } else if (Ties(value, out.objective)) {
        out.optima.push_back({std::move(z), *h, value});
        out.objective = std::min(out.objective, value);
      }
      ceiling = std::min(ceiling, out.objective);
    }
  }
  if (out.optima.empty()) {
    throw Error(ErrorCode::kInternal, "oracle found no feasible assignment");
  }
  return out;
}

}  // namespace hmsvm
