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

#include "benders/logging.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <memory>
#include <string>

namespace benders {
namespace {

spdlog::level::level_enum ToSpd(LogLevel level) {
  switch (level) {
    case LogLevel::kDebug:
      return spdlog::level::debug;
    case LogLevel::kInfo:
      return spdlog::level::info;
    case LogLevel::kWarn:
      return spdlog::level::warn;
    case LogLevel::kError:
      return spdlog::level::err;
    case LogLevel::kOff:
      return spdlog::level::off;
  }
  return spdlog::level::warn;
}

LogLevel FromEnv() {
  const char* raw = std::getenv("BENDERS_FILTER_LOG");
  if (raw == nullptr) return LogLevel::kWarn;
  const std::string v(raw);
  if (v == "debug" || v == "3") return LogLevel::kDebug;
  if (v == "info" || v == "2") return LogLevel::kInfo;
  if (v == "warn" || v == "1") return LogLevel::kWarn;
  if (v == "error") return LogLevel::kError;
  if (v == "off" || v == "0") return LogLevel::kOff;
  return LogLevel::kWarn;
}

std::shared_ptr<spdlog::logger>& Logger() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = std::make_shared<spdlog::logger>(
        "benders", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%H:%M:%S.%e] [%l] %v");
    l->set_level(ToSpd(FromEnv()));
    return l;
  }();
  return logger;
}

LogLevel& Threshold() {
  static LogLevel level = FromEnv();
  return level;
}

}  // namespace

LogLevel LogThreshold() { return Threshold(); }

void SetLogThreshold(LogLevel level) {
  Threshold() = level;
  Logger()->set_level(ToSpd(level));
}

void Log(LogLevel level, const std::string& message) {
  if (level < Threshold()) return;
  Logger()->log(ToSpd(level), message);
}

}  // namespace benders
