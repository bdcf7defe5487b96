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

#ifndef HMSVM_CLOCK_HPP_
#define HMSVM_CLOCK_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>

namespace hmsvm {

// Elapsed time for budget decisions. In wall mode it reads a steady clock;
// in deterministic mode it converts charged work units (roughly one per
// floating-point multiply-add in the LP/QP kernels) into seconds at a fixed
// rate, so repeated runs make identical budget decisions.
class Stopwatch {
 public:
  // Work units per deterministic second; calibrated so that a deterministic
  // second is within a factor of two of a wall second on a current x86-64
  // core for both the LP-bound and QP-bound phases.
  static constexpr double kWorkUnitsPerSecond = 3.6e9;

  explicit Stopwatch(bool deterministic = false)
      : deterministic_(deterministic),
        start_(std::chrono::steady_clock::now()) {}

  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

  bool deterministic() const { return deterministic_; }

  void Charge(double work) {
    work_.fetch_add(static_cast<std::uint64_t>(work > 0 ? work : 0),
                    std::memory_order_relaxed);
  }

  double Elapsed() const {
    if (deterministic_) {
      return static_cast<double>(work_.load(std::memory_order_relaxed)) /
             kWorkUnitsPerSecond;
    }
    return WallElapsed();
  }

  double WallElapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  bool deterministic_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> work_{0};
};

// A point on a Stopwatch's timeline. A null clock never expires.
struct Deadline {
  Stopwatch* clock = nullptr;
  double at = std::numeric_limits<double>::infinity();

  static Deadline Never() { return {}; }
  static Deadline After(Stopwatch& clock, double seconds) {
    return {&clock, clock.Elapsed() + seconds};
  }
  Deadline Sooner(double seconds_from_now) const {
    if (clock == nullptr) return *this;
    double t = clock->Elapsed() + seconds_from_now;
    return {clock, t < at ? t : at};
  }

  bool Expired() const { return clock != nullptr && clock->Elapsed() >= at; }
  double Remaining() const {
    if (clock == nullptr) return std::numeric_limits<double>::infinity();
    double r = at - clock->Elapsed();
    return r > 0 ? r : 0.0;
  }
  void Charge(double work) const {
    if (clock != nullptr) clock->Charge(work);
  }
};

}  // namespace hmsvm

#endif  // HMSVM_CLOCK_HPP_
