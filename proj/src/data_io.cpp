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

#include "hmsvm/data_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <vector>

#include "hmsvm/log.hpp"

namespace hmsvm {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ParseDouble(const std::string& text, double* out) {
  const std::string t = Trim(text);
  if (t.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) return false;
  *out = v;
  return true;
}

[[noreturn]] void Fail(ErrorCode code, const std::string& path, int line,
                       const std::string& what) {
  throw Error(code, path + ":" + std::to_string(line) + ": " + what);
}

// -1 and 0 map to -1, +1 to +1.
bool MapLabel(double v, double* out) {
  if (v == 1.0) {
    *out = 1.0;
  } else if (v == -1.0 || v == 0.0) {
    *out = -1.0;
  } else {
    return false;
  }
  return true;
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string Stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

Dataset LoadCsv(const std::string& path, int label_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string name;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  int width = -1;
  int lineno = 0;
  bool seen_data = false;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = Trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (!seen_data && t.rfind("# name:", 0) == 0) name = Trim(t.substr(7));
      continue;
    }
    const std::vector<std::string> fields = SplitCommas(t);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      numeric &= ParseDouble(fields[j], &values[j]);
    }
    if (!numeric && !seen_data && width < 0) {
      width = static_cast<int>(fields.size());  // header row
      seen_data = true;
      continue;
    }
    seen_data = true;
    if (width < 0) width = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != width) {
      Fail(ErrorCode::kParse, path, lineno,
           "expected " + std::to_string(width) + " fields, found " +
               std::to_string(fields.size()));
    }
    if (!numeric) Fail(ErrorCode::kParse, path, lineno, "non-numeric field");
    if (width < 2) Fail(ErrorCode::kParse, path, lineno, "need features and a label");
    const int lc = label_column < 0 ? width + label_column : label_column;
    if (lc < 0 || lc >= width) {
      Fail(ErrorCode::kInvalidInput, path, lineno, "label column out of range");
    }
    double y;
    if (!MapLabel(values[lc], &y)) {
      Fail(ErrorCode::kInvalidInput, path, lineno,
           "label must be -1, +1 or 0/1");
    }
    values.erase(values.begin() + lc);
    for (double v : values) {
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kInvalidInput, path, lineno, "non-finite feature value");
      }
    }
    rows.push_back(std::move(values));
    labels.push_back(y);
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, path + ": no data rows");
  const int n = static_cast<int>(rows.size());
  const int m = width - 1;
  RowMatrix x(n, m);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) x(i, j) = rows[i][j];
    y[i] = labels[i];
  }
  return Dataset(std::move(x), std::move(y), name.empty() ? Stem(path) : name);
}

Dataset LoadLibsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> labels;
  int m = 1;
  int lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    double raw, y;
    if (!ParseDouble(token, &raw) || !MapLabel(raw, &y)) {
      Fail(ErrorCode::kInvalidInput, path, lineno,
           "label '" + token + "' not in {-1, +1, 0, 1}");
    }
    std::vector<std::pair<int, double>> entries;
    while (ss >> token) {
      const auto colon = token.find(':');
      double idx_value, v;
      if (colon == std::string::npos ||
          !ParseDouble(token.substr(0, colon), &idx_value) ||
          !ParseDouble(token.substr(colon + 1), &v)) {
        Fail(ErrorCode::kParse, path, lineno, "malformed token '" + token + "'");
      }
      if (idx_value < 1 || idx_value != std::floor(idx_value) || idx_value > 1e7) {
        Fail(ErrorCode::kParse, path, lineno, "feature index must be a positive integer");
      }
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kInvalidInput, path, lineno, "non-finite feature value");
      }
      const int idx = static_cast<int>(idx_value);
      m = std::max(m, idx);
      entries.emplace_back(idx - 1, v);
    }
    rows.push_back(std::move(entries));
    labels.push_back(y);
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, path + ": no data rows");
  const int n = static_cast<int>(rows.size());
  RowMatrix x = RowMatrix::Zero(n, m);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& [j, v] : rows[i]) x(i, j) = v;
    y[i] = labels[i];
  }
  return Dataset(std::move(x), std::move(y), Stem(path));
}

void SaveDataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  if (!d.name().empty()) out << "# name: " << d.name() << '\n';
  for (int j = 0; j < d.m(); ++j) out << 'x' << (j + 1) << ',';
  out << "label\n";
  out << std::setprecision(17);
  for (int i = 0; i < d.n(); ++i) {
    for (int j = 0; j < d.m(); ++j) out << d.features()(i, j) << ',';
    out << (d.label(i) > 0 ? "1" : "-1") << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path);
}

void SyntheticSpec::Validate() const {
  if (n < 2 || m < 1) {
    throw Error(ErrorCode::kInvalidInput, "synthetic data needs n >= 2, m >= 1");
  }
  if (!(outlier_fraction >= 0.0 && outlier_fraction <= 0.5)) {
    throw Error(ErrorCode::kInvalidInput, "outlier fraction must lie in [0, 0.5]");
  }
}

std::string SyntheticName(const SyntheticSpec& spec) {
  std::ostringstream os;
  os << (spec.family == OutlierFamily::kTypeA ? "typeA" : "typeB") << "_n"
     << spec.n << "_m" << spec.m << "_s" << spec.seed;
  return os.str();
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  if (spec.n < 2 * spec.m) {
    HMSVM_LOG(kWarn, "synthetic spec has n < 2m (n=" << spec.n << ", m="
                                                    << spec.m << ")");
  }
  const int n = spec.n, m = spec.m;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowMatrix x(n, m);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    y[i] = i % 2 == 0 ? 1.0 : -1.0;
    for (int j = 0; j < m; ++j) x(i, j) = gauss(rng);
    x(i, 0) += kCloudOffset * y[i];
  }

  const int k = static_cast<int>(std::floor(spec.outlier_fraction * n));
  if (k == 0) return Dataset(std::move(x), std::move(y), SyntheticName(spec));

  // Pick which samples become outliers.
  std::vector<int> pool;
  if (spec.family == OutlierFamily::kTypeA) {
    const double source = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      if (y[i] == source) pool.push_back(i);
    }
  } else {
    for (int i = 0; i < n; ++i) pool.push_back(i);
  }
  for (int t = 0; t < k; ++t) {
    std::uniform_int_distribution<int> pick(t, static_cast<int>(pool.size()) - 1);
    std::swap(pool[t], pool[pick(rng)]);
  }
  std::vector<int> outliers(pool.begin(), pool.begin() + k);
  std::sort(outliers.begin(), outliers.end());
  std::vector<bool> is_outlier(n, false);
  for (int i : outliers) is_outlier[i] = true;

  if (spec.family == OutlierFamily::kTypeA) {
    Eigen::RowVectorXd dir(m);
    do {
      for (int j = 0; j < m; ++j) dir[j] = gauss(rng);
    } while (dir.norm() < 1e-12);
    dir /= dir.norm();
    const double radius = std::uniform_real_distribution<double>(
        kClusterMinRadius, kClusterMaxRadius)(rng);
    const Eigen::RowVectorXd center = radius * dir;
    for (int i : outliers) {
      Eigen::RowVectorXd p(m);
      do {
        for (int j = 0; j < m; ++j) p[j] = kClusterSigma * gauss(rng);
      } while (p.norm() > 4.0 * kClusterSigma);
      x.row(i) = center + p;
    }
  } else {
    Eigen::RowVectorXd lo = Eigen::RowVectorXd::Constant(m, kInf);
    Eigen::RowVectorXd hi = Eigen::RowVectorXd::Constant(m, -kInf);
    for (int i = 0; i < n; ++i) {
      if (is_outlier[i]) continue;
      lo = lo.cwiseMin(x.row(i));
      hi = hi.cwiseMax(x.row(i));
    }
    const Eigen::RowVectorXd mid = 0.5 * (lo + hi);
    const Eigen::RowVectorXd half = 0.5 * (hi - lo) * (1.0 + kBoxInflation);
    for (int i : outliers) {
      for (int j = 0; j < m; ++j) {
        x(i, j) = std::uniform_real_distribution<double>(mid[j] - half[j],
                                                         mid[j] + half[j])(rng);
      }
    }
  }
  for (int i : outliers) y[i] = -y[i];
  return Dataset(std::move(x), std::move(y), SyntheticName(spec));
}

}  // namespace hmsvm
