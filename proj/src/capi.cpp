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


#include "hmsvm/hmsvm.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "hmsvm/bnb.hpp"
#include "hmsvm/data_io.hpp"
#include "hmsvm/log.hpp"
#include "hmsvm/oracle.hpp"
#include "hmsvm/report.hpp"

struct hmsvm_dataset {
  hmsvm::Dataset data;
};

struct hmsvm_config {
  hmsvm::SolverConfig cfg;
};

struct hmsvm_report {
  hmsvm::Dataset data;
  hmsvm::SolverConfig cfg;
  hmsvm::SolveReport report;
};

struct hmsvm_oracle {
  hmsvm::OracleResult result;
};

namespace {

thread_local std::string g_last_error;

hmsvm_status StatusFor(hmsvm::ErrorCode code) {
  switch (code) {
    case hmsvm::ErrorCode::kInvalidInput:
      return HMSVM_ERR_INVALID_INPUT;
    case hmsvm::ErrorCode::kIo:
      return HMSVM_ERR_IO;
    case hmsvm::ErrorCode::kParse:
      return HMSVM_ERR_PARSE;
    case hmsvm::ErrorCode::kDimension:
      return HMSVM_ERR_DIMENSION;
    case hmsvm::ErrorCode::kNumerical:
      return HMSVM_ERR_NUMERICAL;
    case hmsvm::ErrorCode::kTooLarge:
      return HMSVM_ERR_TOO_LARGE;
    case hmsvm::ErrorCode::kTimeLimit:
      return HMSVM_ERR_TIME_LIMIT;
    case hmsvm::ErrorCode::kInternal:
      return HMSVM_ERR_INTERNAL;
  }
  return HMSVM_ERR_INTERNAL;
}

hmsvm_status Fail(hmsvm_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
hmsvm_status Guard(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const hmsvm::Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(HMSVM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(HMSVM_ERR_INTERNAL, e.what());
  }
}

#define HMSVM_REQUIRE(cond, what) \
  if (!(cond)) return Fail(HMSVM_ERR_INVALID_INPUT, what)

bool Flag(double v) { return v != 0.0; }

struct ConfigKey {
  std::function<void(hmsvm::SolverConfig&, double)> set;
  std::function<double(const hmsvm::SolverConfig&)> get;
};

#define HMSVM_REAL_KEY(name)                                       \
  {                                                                \
    #name, {[](hmsvm::SolverConfig& c, double v) { c.name = v; },  \
            [](const hmsvm::SolverConfig& c) { return c.name; }}   \
  }
#define HMSVM_INT_KEY(name)                                                    \
  {                                                                            \
    #name, {[](hmsvm::SolverConfig& c, double v) {                             \
              c.name = static_cast<decltype(c.name)>(v);                       \
            },                                                                 \
            [](const hmsvm::SolverConfig& c) {                                 \
              return static_cast<double>(c.name);                              \
            }}                                                                 \
  }
#define HMSVM_FLAG_KEY(name)                                             \
  {                                                                      \
    #name, {[](hmsvm::SolverConfig& c, double v) { c.name = Flag(v); }, \
            [](const hmsvm::SolverConfig& c) { return c.name ? 1.0 : 0.0; }} \
  }

const std::map<std::string, ConfigKey>& ConfigKeys() {
  static const std::map<std::string, ConfigKey> keys = {
      HMSVM_REAL_KEY(C),
      HMSVM_REAL_KEY(t_max),
      HMSVM_REAL_KEY(t_s),
      HMSVM_REAL_KEY(t_b),
      HMSVM_REAL_KEY(feas_tol),
      HMSVM_REAL_KEY(opt_tol),
      HMSVM_INT_KEY(seed),
      HMSVM_INT_KEY(sample_size_cap),
      HMSVM_INT_KEY(sampling_patience),
      HMSVM_INT_KEY(subset_node_cap),
      HMSVM_INT_KEY(threads),
      HMSVM_FLAG_KEY(use_cuts),
      HMSVM_FLAG_KEY(tight_wub),
      HMSVM_FLAG_KEY(single_thread),
      HMSVM_FLAG_KEY(dominance_filter),
      HMSVM_FLAG_KEY(qp_warm_start),
      {"big_m",
       {[](hmsvm::SolverConfig& c, double v) {
          c.big_m.mode = v == 0.0 ? hmsvm::BigMPolicy::Mode::kDerived
                                  : hmsvm::BigMPolicy::Mode::kFixed;
          c.big_m.value = v;
        },
        [](const hmsvm::SolverConfig& c) {
          return c.big_m.mode == hmsvm::BigMPolicy::Mode::kFixed
                     ? c.big_m.value
                     : 0.0;
        }}},
  };
  return keys;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* hmsvm_version(void) { return "0.1.0"; }

const char* hmsvm_last_error(void) { return g_last_error.c_str(); }

void hmsvm_set_log_level(int level) {
  const int clamped = level < 0 ? 0 : (level > 3 ? 3 : level);
  hmsvm::SetLogLevel(static_cast<hmsvm::LogLevel>(clamped));
}

void hmsvm_string_free(char* s) { std::free(s); }

hmsvm_status hmsvm_dataset_load(const char* path, const char* format,
                                hmsvm_dataset** out) {
  if (out != nullptr) *out = nullptr;
  HMSVM_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    const std::string fmt = format == nullptr ? "csv" : format;
    if (fmt == "csv") {
      *out = new hmsvm_dataset{hmsvm::LoadCsv(path)};
    } else if (fmt == "libsvm") {
      *out = new hmsvm_dataset{hmsvm::LoadLibsvm(path)};
    } else {
      return Fail(HMSVM_ERR_INVALID_INPUT, "unknown format '" + fmt + "'");
    }
    return HMSVM_OK;
  });
}

hmsvm_status hmsvm_dataset_from_arrays(int n, int m, const double* x,
                                       const double* y, const char* name,
                                       hmsvm_dataset** out) {
  if (out != nullptr) *out = nullptr;
  HMSVM_REQUIRE(x != nullptr && y != nullptr && out != nullptr,
                "null argument");
  HMSVM_REQUIRE(n > 0 && m > 0, "n and m must be positive");
  return Guard([&] {
    hmsvm::RowMatrix features =
        Eigen::Map<const hmsvm::RowMatrix>(x, n, m);
    hmsvm::Vector labels = Eigen::Map<const hmsvm::Vector>(y, n);
    *out = new hmsvm_dataset{hmsvm::Dataset(std::move(features),
                                            std::move(labels),
                                            name == nullptr ? "" : name)};
    return HMSVM_OK;
  });
}

hmsvm_status hmsvm_dataset_generate(char family, int n, int m,
                                    double outlier_fraction, uint64_t seed,
                                    hmsvm_dataset** out) {
  if (out != nullptr) *out = nullptr;
  HMSVM_REQUIRE(out != nullptr, "null argument");
  HMSVM_REQUIRE(family == 'A' || family == 'B', "family must be 'A' or 'B'");
  return Guard([&] {
    hmsvm::SyntheticSpec spec;
    spec.n = n;
    spec.m = m;
    spec.family = family == 'A' ? hmsvm::OutlierFamily::kTypeA
                                : hmsvm::OutlierFamily::kTypeB;
    spec.outlier_fraction = outlier_fraction;
    spec.seed = seed;
    *out = new hmsvm_dataset{hmsvm::GenerateSynthetic(spec)};
    return HMSVM_OK;
  });
}

hmsvm_status hmsvm_dataset_save(const hmsvm_dataset* d, const char* path) {
  HMSVM_REQUIRE(d != nullptr && path != nullptr, "null argument");
  return Guard([&] {
    hmsvm::SaveDataset(d->data, path);
    return HMSVM_OK;
  });
}

int hmsvm_dataset_n(const hmsvm_dataset* d) { return d ? d->data.n() : 0; }
int hmsvm_dataset_m(const hmsvm_dataset* d) { return d ? d->data.m() : 0; }
const char* hmsvm_dataset_name(const hmsvm_dataset* d) {
  return d ? d->data.name().c_str() : "";
}
void hmsvm_dataset_free(hmsvm_dataset* d) { delete d; }

hmsvm_config* hmsvm_config_new(void) {
  return new (std::nothrow) hmsvm_config{};
}

hmsvm_status hmsvm_config_set(hmsvm_config* c, const char* key, double value) {
  HMSVM_REQUIRE(c != nullptr && key != nullptr, "null argument");
  const auto it = ConfigKeys().find(key);
  if (it == ConfigKeys().end()) {
    return Fail(HMSVM_ERR_INVALID_INPUT,
                std::string("unknown config key '") + key + "'");
  }
  HMSVM_REQUIRE(!std::isnan(value), "config value is NaN");
  it->second.set(c->cfg, value);
  g_last_error.clear();
  return HMSVM_OK;
}

hmsvm_status hmsvm_config_get(const hmsvm_config* c, const char* key,
                              double* value) {
  HMSVM_REQUIRE(c != nullptr && key != nullptr && value != nullptr,
                "null argument");
  const auto it = ConfigKeys().find(key);
  if (it == ConfigKeys().end()) {
    return Fail(HMSVM_ERR_INVALID_INPUT,
                std::string("unknown config key '") + key + "'");
  }
  *value = it->second.get(c->cfg);
  g_last_error.clear();
  return HMSVM_OK;
}

void hmsvm_config_free(hmsvm_config* c) { delete c; }

hmsvm_status hmsvm_solve(const hmsvm_dataset* d, const hmsvm_config* c,
                         hmsvm_report** out) {
  if (out != nullptr) *out = nullptr;
  HMSVM_REQUIRE(d != nullptr && c != nullptr && out != nullptr,
                "null argument");
  return Guard([&] {
    auto r = std::make_unique<hmsvm_report>(
        hmsvm_report{d->data, c->cfg, hmsvm::Solve(d->data, c->cfg)});
    *out = r.release();
    return HMSVM_OK;
  });
}

hmsvm_solve_status hmsvm_report_status(const hmsvm_report* r) {
  if (r == nullptr) return HMSVM_SOLVE_ERROR;
  switch (r->report.status) {
    case hmsvm::SolveStatus::kOptimal:
      return HMSVM_SOLVE_OPTIMAL;
    case hmsvm::SolveStatus::kTimeLimit:
      return HMSVM_SOLVE_TIME_LIMIT;
    case hmsvm::SolveStatus::kInfeasibleInput:
      return HMSVM_SOLVE_INFEASIBLE_INPUT;
    case hmsvm::SolveStatus::kError:
      return HMSVM_SOLVE_ERROR;
  }
  return HMSVM_SOLVE_ERROR;
}

double hmsvm_report_objective(const hmsvm_report* r) {
  return r ? r->report.upper_bound : hmsvm::kInf;
}
double hmsvm_report_lower_bound(const hmsvm_report* r) {
  return r ? r->report.lower_bound : 0.0;
}
double hmsvm_report_gap_percent(const hmsvm_report* r) {
  return r ? r->report.gap_percent : 100.0;
}
long hmsvm_report_nodes(const hmsvm_report* r) {
  return r ? r->report.nodes_explored : 0;
}
long hmsvm_report_cuts(const hmsvm_report* r) {
  return r ? r->report.cuts_generated : 0;
}
double hmsvm_report_total_seconds(const hmsvm_report* r) {
  return r ? r->report.elapsed.Total() : 0.0;
}

hmsvm_status hmsvm_report_hyperplane(const hmsvm_report* r, double* w,
                                     double* b) {
  HMSVM_REQUIRE(r != nullptr, "null argument");
  const hmsvm::Hyperplane& h = r->report.hyperplane;
  if (h.w.size() != r->data.m()) {
    return Fail(HMSVM_ERR_INVALID_INPUT, "report carries no hyperplane");
  }
  if (w != nullptr) std::copy(h.w.data(), h.w.data() + h.w.size(), w);
  if (b != nullptr) *b = h.b;
  return HMSVM_OK;
}

hmsvm_status hmsvm_report_assignment(const hmsvm_report* r, uint8_t* z) {
  HMSVM_REQUIRE(r != nullptr && z != nullptr, "null argument");
  const hmsvm::Assignment& a = r->report.assignment;
  if (a.size() != r->data.n()) {
    return Fail(HMSVM_ERR_INVALID_INPUT, "report carries no assignment");
  }
  std::copy(a.z.begin(), a.z.end(), z);
  return HMSVM_OK;
}

size_t hmsvm_report_cut_count(const hmsvm_report* r) {
  return r ? r->report.cuts.size() : 0;
}

hmsvm_status hmsvm_report_cut(const hmsvm_report* r, size_t k, int* members,
                              size_t cap, size_t* size) {
  HMSVM_REQUIRE(r != nullptr && size != nullptr, "null argument");
  HMSVM_REQUIRE(k < r->report.cuts.size(), "cut index out of range");
  const std::vector<int>& cut = r->report.cuts[k];
  *size = cut.size();
  if (members != nullptr) {
    std::copy_n(cut.begin(), std::min(cap, cut.size()), members);
  }
  return HMSVM_OK;
}

hmsvm_status hmsvm_report_json(const hmsvm_report* r, char** json) {
  HMSVM_REQUIRE(r != nullptr && json != nullptr, "null argument");
  return Guard([&] {
    *json = CopyString(hmsvm::ReportJson(r->data, r->cfg, r->report));
    return HMSVM_OK;
  });
}

int hmsvm_report_exit_code(const hmsvm_report* r) {
  return r ? hmsvm::ExitCodeFor(r->report.status) : 2;
}

void hmsvm_report_free(hmsvm_report* r) { delete r; }

hmsvm_status hmsvm_oracle_solve(const hmsvm_dataset* d, double C,
                                int tight_wub, hmsvm_oracle** out) {
  if (out != nullptr) *out = nullptr;
  HMSVM_REQUIRE(d != nullptr && out != nullptr, "null argument");
  return Guard([&] {
    *out = new hmsvm_oracle{
        hmsvm::SolveByEnumeration(d->data, C, tight_wub != 0)};
    return HMSVM_OK;
  });
}

double hmsvm_oracle_objective(const hmsvm_oracle* o) {
  return o ? o->result.objective : hmsvm::kInf;
}
double hmsvm_oracle_w_ub(const hmsvm_oracle* o) {
  return o ? o->result.w_ub : 0.0;
}
size_t hmsvm_oracle_count(const hmsvm_oracle* o) {
  return o ? o->result.optima.size() : 0;
}

hmsvm_status hmsvm_oracle_optimum(const hmsvm_oracle* o, size_t k, uint8_t* z,
                                  double* w, double* b) {
  HMSVM_REQUIRE(o != nullptr, "null argument");
  HMSVM_REQUIRE(k < o->result.optima.size(), "optimum index out of range");
  const hmsvm::OracleOptimum& opt = o->result.optima[k];
  if (z != nullptr) std::copy(opt.assignment.z.begin(), opt.assignment.z.end(), z);
  if (w != nullptr) {
    std::copy(opt.hyperplane.w.data(),
              opt.hyperplane.w.data() + opt.hyperplane.w.size(), w);
  }
  if (b != nullptr) *b = opt.hyperplane.b;
  return HMSVM_OK;
}

void hmsvm_oracle_free(hmsvm_oracle* o) { delete o; }

}  // extern "C"
