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

// Minimal leveled logging to standard error. The threshold starts from the
// HMSVM_LOG environment variable (error, warn, info, debug; default warn).

#ifndef HMSVM_LOG_HPP_
#define HMSVM_LOG_HPP_

#include <sstream>
#include <string>

namespace hmsvm {

enum class LogLevel { kError = 0, kWarn, kInfo, kDebug };

void SetLogLevel(LogLevel level);
bool LogEnabled(LogLevel level);
void LogMessage(LogLevel level, const std::string& message);

}  // namespace hmsvm

#define HMSVM_LOG(level, expr)                                \
  do {                                                        \
    if (::hmsvm::LogEnabled(::hmsvm::LogLevel::level)) {      \
      std::ostringstream hmsvm_log_os_;                       \
      hmsvm_log_os_ << expr;                                  \
      ::hmsvm::LogMessage(::hmsvm::LogLevel::level,           \
                          hmsvm_log_os_.str());               \
    }                                                         \
  } while (0)

#endif  // HMSVM_LOG_HPP_
