// Copyright 2026 The Benders Filter Authors
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

#ifndef BENDERS_LOGGING_H_
#define BENDERS_LOGGING_H_

#include <string>

namespace benders {

enum class LogLevel { kDebug, kInfo, kWarn, kError, kOff };

// Log threshold is read once from BENDERS_FILTER_LOG: one of
// debug|info|warn|error|off, or 0..3 (0 = off, 3 = debug). Default: warn.
LogLevel LogThreshold();
void SetLogThreshold(LogLevel level);

// Writes to stderr when `level` is at or above the threshold.
void Log(LogLevel level, const std::string& message);

}  // namespace benders

#endif  // BENDERS_LOGGING_H_
