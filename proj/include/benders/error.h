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

#ifndef BENDERS_ERROR_H_
#define BENDERS_ERROR_H_

#include <stdexcept>
#include <string>

namespace benders {

// Error categories surfaced by the library. The C API maps these one-to-one
// onto bf_status codes.
enum class ErrorCode {
  kInvalidArgument,
  kInvalidParams,
  kDimensionMismatch,
  kNumericalFailure,
  kNodeLimitExceeded,
  kParseError,
  kSchemaVersionMismatch,
  kIoError,
  kZeroNormVector,
  kInvalidK,
  kEmptyViolatedPool,
  kEmptyInput,
  kInsufficientPairs,
  kUnknownBaseline,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace benders

#endif  // BENDERS_ERROR_H_
