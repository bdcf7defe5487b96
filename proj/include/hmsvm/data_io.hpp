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

#ifndef HMSVM_DATA_IO_HPP_
#define HMSVM_DATA_IO_HPP_

#include <cstdint>
#include <string>

#include "hmsvm/model.hpp"

namespace hmsvm {

// Comma-separated values. Blank lines are skipped; a first row with a
// non-numeric field is a header; a leading "# name: <text>" line carries
// the dataset name (otherwise the file stem is used). `label_column` counts
// from zero, negative values from the end (-1 = last). Labels -1/+1 are
// taken as is and 0 maps to -1.
Dataset LoadCsv(const std::string& path, int label_column = -1);

// Sparse "label idx:val ..." lines with 1-based indices, densified; m is
// the largest index seen (at least 1).
Dataset LoadLibsvm(const std::string& path);

// CSV with the label last and 17 significant digits, so that LoadCsv
// restores the dataset exactly.
void SaveDataset(const Dataset& d, const std::string& path);

enum class OutlierFamily { kTypeA, kTypeB };

struct SyntheticSpec {
  int n = 60;
  int m = 2;
  OutlierFamily family = OutlierFamily::kTypeA;
  double outlier_fraction = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Fixed constants of the generator.
inline constexpr double kCloudOffset = 2.0;     // class means at +-2 e_1
inline constexpr double kClusterSigma = 0.25;   // Type-A outlier spread
inline constexpr double kClusterMinRadius = 6.0;
inline constexpr double kClusterMaxRadius = 10.0;
inline constexpr double kBoxInflation = 0.5;    // Type-B sampling box

// Two unit-variance Gaussian classes with alternating labels, then
// floor(fraction n) samples moved and relabeled: Type A draws them from one
// class into a tight cluster (kept within 4 sigma of its center) far from
// the origin, Type B scatters them uniformly over the inflated bounding box
// of the inliers.
Dataset GenerateSynthetic(const SyntheticSpec& spec);

std::string SyntheticName(const SyntheticSpec& spec);

}  // namespace hmsvm

#endif  // HMSVM_DATA_IO_HPP_
