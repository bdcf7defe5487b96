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


// Command line front end. Everything goes through the C API.
//
//   hmsvm solve    --data PATH [-C 1] [--time-limit 600] [--ts S] [--tb S]
//   hmsvm generate --family A --n 60 --m 2 --seed 1 --out PATH
//   hmsvm oracle   --data PATH -C 1
//   hmsvm bench    --family A --n 60 --m 2 --replicates 5 --C 1,10 --out DIR
//
// Exit codes: 0 optimal (or success), 1 input or usage error, 2 solver
// error, 3 time limit with valid bounds.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmsvm/hmsvm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

// Fraction of the total budget given to each cut phase when --ts/--tb are
// not set; 5% each of the 600 s default gives the reference 30 s.
constexpr double kDefaultPhaseShare = 0.05;

struct DatasetDeleter {
  void operator()(hmsvm_dataset* d) const { hmsvm_dataset_free(d); }
};
struct ConfigDeleter {
  void operator()(hmsvm_config* c) const { hmsvm_config_free(c); }
};
struct ReportDeleter {
  void operator()(hmsvm_report* r) const { hmsvm_report_free(r); }
};
struct OracleDeleter {
  void operator()(hmsvm_oracle* o) const { hmsvm_oracle_free(o); }
};
using DatasetPtr = std::unique_ptr<hmsvm_dataset, DatasetDeleter>;
using ConfigPtr = std::unique_ptr<hmsvm_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<hmsvm_report, ReportDeleter>;
using OraclePtr = std::unique_ptr<hmsvm_oracle, OracleDeleter>;

int ReportFailure(const char* what) {
  std::cerr << "hmsvm: " << what << ": " << hmsvm_last_error() << '\n';
  return kExitInput;
}

// Shared solver options of `solve` and `bench`.
struct SolveOptions {
  double C = 1.0;
  double t_max = 600.0;
  std::optional<double> t_s, t_b;
  long seed = 0;
  bool no_cuts = false;
  bool tight_wub = false;
  bool single_thread = false;
  double big_m = 0.0;
  int sample_cap = 50;

  void Register(CLI::App* app, bool with_c) {
    if (with_c) {
      app->add_option("-C", C, "cost of sacrificing one sample")
          ->check(CLI::PositiveNumber);
    }
    app->add_option("--time-limit", t_max, "total budget in seconds")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--ts", t_s, "sampling phase budget (default 5% of total)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--tb", t_b, "full phase budget (default 5% of total)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "seed for subset sampling");
    app->add_flag("--no-cuts", no_cuts, "skip cut generation");
    app->add_flag("--tight-wub", tight_wub, "weight box sqrt(2 U), U = incumbent objective");
    app->add_flag("--single-thread", single_thread,
                  "sequential, reproducible run on the work clock");
    app->add_option("--big-m", big_m, "fixed big-M constant (0 = derived)");
    app->add_option("--sample-cap", sample_cap, "largest sampled subset")
        ->check(CLI::PositiveNumber);
  }

  ConfigPtr Build(double c_value) const {
    ConfigPtr cfg(hmsvm_config_new());
    const double share = kDefaultPhaseShare * t_max;
    const std::vector<std::pair<const char*, double>> values = {
        {"C", c_value},
        {"t_max", t_max},
        {"t_s", t_s.value_or(share)},
        {"t_b", t_b.value_or(share)},
        {"seed", static_cast<double>(seed)},
        {"use_cuts", no_cuts ? 0.0 : 1.0},
        {"tight_wub", tight_wub ? 1.0 : 0.0},
        {"single_thread", single_thread ? 1.0 : 0.0},
        {"big_m", big_m},
        {"sample_size_cap", static_cast<double>(sample_cap)},
    };
    for (const auto& [key, v] : values) {
      if (hmsvm_config_set(cfg.get(), key, v) != HMSVM_OK) return nullptr;
    }
    return cfg;
  }
};

std::string Json(const hmsvm_report* r) {
  char* text = nullptr;
  if (hmsvm_report_json(r, &text) != HMSVM_OK) return "{}";
  std::string out(text);
  hmsvm_string_free(text);
  return out;
}

bool WriteFile(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  out << body << '\n';
  return static_cast<bool>(out);
}

// ---- solve ----

struct SolveArgs {
  std::string data, format = "csv", out;
  SolveOptions opt;
};

int RunSolve(const SolveArgs& a) {
  hmsvm_dataset* raw = nullptr;
  if (hmsvm_dataset_load(a.data.c_str(), a.format.c_str(), &raw) != HMSVM_OK) {
    return ReportFailure("cannot load data");
  }
  DatasetPtr data(raw);
  ConfigPtr cfg = a.opt.Build(a.opt.C);
  if (!cfg) return ReportFailure("invalid configuration");
  hmsvm_report* rep = nullptr;
  if (hmsvm_solve(data.get(), cfg.get(), &rep) != HMSVM_OK) {
    return ReportFailure("solve rejected its input");
  }
  ReportPtr report(rep);
  const std::string json = Json(report.get());
  if (a.out.empty()) {
    std::cout << json << '\n';
  } else if (!WriteFile(a.out, json)) {
    std::cerr << "hmsvm: cannot write " << a.out << '\n';
    return kExitInput;
  }
  const int code = hmsvm_report_exit_code(report.get());
  if (code != kExitOk) {
    std::cerr << "hmsvm: finished with status code " << code << " (gap "
              << hmsvm_report_gap_percent(report.get()) << "%)\n";
  }
  return code;
}

// ---- generate ----

struct GenerateArgs {
  std::string family = "A", out;
  int n = 60, m = 2;
  double outliers = 0.1;
  long seed = 1;
};

int RunGenerate(const GenerateArgs& a) {
  hmsvm_dataset* raw = nullptr;
  if (hmsvm_dataset_generate(a.family[0], a.n, a.m, a.outliers,
                             static_cast<uint64_t>(a.seed),
                             &raw) != HMSVM_OK) {
    return ReportFailure("cannot generate data");
  }
  DatasetPtr data(raw);
  if (hmsvm_dataset_save(data.get(), a.out.c_str()) != HMSVM_OK) {
    return ReportFailure("cannot save data");
  }
  return kExitOk;
}

// ---- oracle ----

struct OracleArgs {
  std::string data, format = "csv";
  double C = 1.0;
  bool tight_wub = false;
};

int RunOracle(const OracleArgs& a) {
  hmsvm_dataset* raw = nullptr;
  if (hmsvm_dataset_load(a.data.c_str(), a.format.c_str(), &raw) != HMSVM_OK) {
    return ReportFailure("cannot load data");
  }
  DatasetPtr data(raw);
  hmsvm_oracle* oraw = nullptr;
  if (hmsvm_oracle_solve(data.get(), a.C, a.tight_wub, &oraw) != HMSVM_OK) {
    return ReportFailure("exhaustive search failed");
  }
  OraclePtr oracle(oraw);
  const int n = hmsvm_dataset_n(data.get());
  const int m = hmsvm_dataset_m(data.get());
  std::cout << std::setprecision(12);
  std::cout << "objective " << hmsvm_oracle_objective(oracle.get()) << '\n';
  std::cout << "w_ub " << hmsvm_oracle_w_ub(oracle.get()) << '\n';
  std::vector<uint8_t> z(n);
  std::vector<double> w(m);
  double b = 0.0;
  for (size_t k = 0; k < hmsvm_oracle_count(oracle.get()); ++k) {
    hmsvm_oracle_optimum(oracle.get(), k, z.data(), w.data(), &b);
    std::cout << "optimum " << k << " sacrificed [";
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (!z[i]) continue;
      std::cout << (first ? "" : ",") << i;
      first = false;
    }
    std::cout << "] w [";
    for (int j = 0; j < m; ++j) std::cout << (j ? "," : "") << w[j];
    std::cout << "] b " << b << '\n';
  }
  return kExitOk;
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::string> families = {"A"};
  std::vector<int> ns = {60};
  std::vector<int> ms = {2};
  std::vector<double> cs = {1.0, 10.0};
  std::vector<std::string> data;
  std::string format = "csv";
  int replicates = 5;
  long first_seed = 1;
  double outliers = 0.1;
  bool ablation = false;
  std::string out = "bench_out";
  SolveOptions opt;
};

struct RunRecord {
  std::string instance;
  int n = 0, m = 0;
  double C = 0.0;
  bool with_cuts = true;
  bool optimal = false;
  double gap = 100.0;
  double seconds = 0.0;
};

struct GroupStats {
  int runs = 0, opts = 0;
  double gap_sum = 0.0, time_sum = 0.0;
  void Add(const RunRecord& r) {
    ++runs;
    opts += r.optimal ? 1 : 0;
    gap_sum += r.gap;
    time_sum += r.seconds;
  }
};

std::string FileStem(const std::string& instance, double C, bool with_cuts) {
  std::ostringstream os;
  os << instance << "_C" << C << (with_cuts ? "" : "_nocuts");
  return os.str();
}

int RunBench(BenchArgs a) {
  std::vector<DatasetPtr> instances;
  for (const std::string& path : a.data) {
    hmsvm_dataset* raw = nullptr;
    if (hmsvm_dataset_load(path.c_str(), a.format.c_str(), &raw) != HMSVM_OK) {
      return ReportFailure(("cannot load " + path).c_str());
    }
    instances.emplace_back(raw);
  }
  if (a.data.empty()) {
    for (const std::string& fam : a.families) {
      for (int n : a.ns) {
        for (int m : a.ms) {
          for (int r = 0; r < a.replicates; ++r) {
            hmsvm_dataset* raw = nullptr;
            const auto seed = static_cast<uint64_t>(a.first_seed + r);
            if (hmsvm_dataset_generate(fam[0], n, m, a.outliers, seed, &raw) !=
                HMSVM_OK) {
              return ReportFailure("cannot generate grid instance");
            }
            instances.emplace_back(raw);
          }
        }
      }
    }
  }
  if (instances.empty() || a.cs.empty()) {
    std::cerr << "hmsvm: bench grid is empty\n";
    return kExitInput;
  }
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) {
    std::cerr << "hmsvm: cannot create " << a.out << ": " << ec.message() << '\n';
    return kExitInput;
  }

  std::cout << "# hmsvm bench: times are wall seconds on this machine, not "
               "normalized to any reference hardware\n";
  std::vector<RunRecord> records;
  std::vector<bool> modes = {true};
  if (a.ablation) modes.push_back(false);
  for (const DatasetPtr& d : instances) {
    for (double C : a.cs) {
      for (bool with_cuts : modes) {
        SolveOptions opt = a.opt;
        opt.no_cuts = !with_cuts || a.opt.no_cuts;
        ConfigPtr cfg = opt.Build(C);
        if (!cfg) return ReportFailure("invalid configuration");
        RunRecord rec;
        rec.instance = hmsvm_dataset_name(d.get());
        rec.n = hmsvm_dataset_n(d.get());
        rec.m = hmsvm_dataset_m(d.get());
        rec.C = C;
        rec.with_cuts = with_cuts;
        hmsvm_report* raw = nullptr;
        const std::string stem = FileStem(rec.instance, C, with_cuts);
        if (hmsvm_solve(d.get(), cfg.get(), &raw) != HMSVM_OK) {
          // Recorded as a failed run; the harness carries on.
          std::cerr << "hmsvm: " << stem << ": " << hmsvm_last_error() << '\n';
          records.push_back(rec);
          continue;
        }
        ReportPtr rep(raw);
        rec.optimal = hmsvm_report_status(rep.get()) == HMSVM_SOLVE_OPTIMAL;
        rec.gap = hmsvm_report_gap_percent(rep.get());
        if (!std::isfinite(rec.gap)) rec.gap = 100.0;
        rec.seconds = hmsvm_report_total_seconds(rep.get());
        if (!WriteFile(a.out + "/" + stem + ".json", Json(rep.get()))) {
          std::cerr << "hmsvm: cannot write report for " << stem << '\n';
          return kExitSolver;
        }
        std::cout << stem << " optimal=" << rec.optimal << " gap=" << rec.gap
                  << " time=" << rec.seconds << '\n';
        records.push_back(rec);
      }
    }
  }

  // Groups by n and by m, plus the whole grid.
  std::map<std::string, std::pair<GroupStats, GroupStats>> groups;
  std::vector<std::string> order;
  auto add = [&](const std::string& key, const RunRecord& r) {
    if (!groups.count(key)) order.push_back(key);
    auto& g = groups[key];
    (r.with_cuts ? g.first : g.second).Add(r);
  };
  for (const RunRecord& r : records) {
    add("n=" + std::to_string(r.n), r);
    add("m=" + std::to_string(r.m), r);
    add("all", r);
  }
  std::ostringstream csv;
  csv << "group,runs,n_opts,avg_gap_percent,avg_time_seconds";
  if (a.ablation) {
    csv << ",nocuts_n_opts,nocuts_avg_gap_percent,nocuts_avg_time_seconds";
  }
  csv << '\n' << std::setprecision(10);
  for (const std::string& key : order) {
    const auto& [cut, plain] = groups[key];
    const double runs = std::max(cut.runs, 1);
    csv << key << ',' << cut.runs << ',' << cut.opts << ','
        << cut.gap_sum / runs << ',' << cut.time_sum / runs;
    if (a.ablation) {
      const double pr = std::max(plain.runs, 1);
      csv << ',' << plain.opts << ',' << plain.gap_sum / pr << ','
          << plain.time_sum / pr;
    }
    csv << '\n';
  }
  if (!WriteFile(a.out + "/summary.csv", csv.str())) {
    std::cerr << "hmsvm: cannot write summary\n";
    return kExitSolver;
  }
  std::cout << csv.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact hard-margin SVM training by combinatorial Benders cuts"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", std::string(hmsvm_version()));
  int log_level = 1;
  CLI::Option* log_opt =
      app.add_option("--log-level", log_level, "0 error .. 3 debug")
          ->check(CLI::Range(0, 3));

  SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "train on one dataset");
  s->add_option("--data", solve.data, "dataset path")->required();
  s->add_option("--format", solve.format, "csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  s->add_option("--out", solve.out, "JSON report path (default stdout)");
  solve.opt.Register(s, true);

  GenerateArgs gen;
  CLI::App* g = app.add_subcommand("generate", "write a synthetic dataset");
  g->add_option("--family", gen.family, "A or B")
      ->check(CLI::IsMember({"A", "B"}));
  g->add_option("--n", gen.n, "samples")->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "features")->check(CLI::PositiveNumber);
  g->add_option("--outliers", gen.outliers, "outlier fraction, at most 0.5");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "CSV path")->required();

  OracleArgs orc;
  CLI::App* o = app.add_subcommand("oracle", "exhaustive optimum, n <= 16");
  o->add_option("--data", orc.data, "dataset path")->required();
  o->add_option("--format", orc.format, "csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  o->add_option("-C", orc.C, "cost of sacrificing one sample")
      ->check(CLI::PositiveNumber);
  o->add_flag("--tight-wub", orc.tight_wub, "weight box sqrt(2 U), U = incumbent objective");

  BenchArgs bench;
  CLI::App* b = app.add_subcommand("bench", "solve a grid and summarize");
  b->add_option("--family", bench.families, "families, e.g. A,B")
      ->delimiter(',')
      ->check(CLI::IsMember({"A", "B"}));
  b->add_option("--n", bench.ns, "sample counts")->delimiter(',');
  b->add_option("--m", bench.ms, "feature counts")->delimiter(',');
  b->add_option("--C", bench.cs, "C grid")->delimiter(',');
  b->add_option("--replicates", bench.replicates, "instances per cell");
  b->add_option("--first-seed", bench.first_seed, "seed of replicate 0");
  b->add_option("--outliers", bench.outliers, "outlier fraction");
  b->add_option("--data", bench.data, "dataset files instead of a grid");
  b->add_option("--format", bench.format, "csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  b->add_flag("--ablation", bench.ablation, "also run every cell without cuts");
  b->add_option("--out", bench.out, "output directory");
  bench.opt.Register(b, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }
  if (log_opt->count() > 0) hmsvm_set_log_level(log_level);
  if (s->parsed()) return RunSolve(solve);
  if (g->parsed()) return RunGenerate(gen);
  if (o->parsed()) return RunOracle(orc);
  if (b->parsed()) return RunBench(bench);
  return kExitInput;
}
