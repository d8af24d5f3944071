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

#include "benders/error.h"

namespace benders {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kInvalidParams:
      return "InvalidParams";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNumericalFailure:
      return "NumericalFailure";
    case ErrorCode::kNodeLimitExceeded:
      return "NodeLimitExceeded";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kSchemaVersionMismatch:
      return "SchemaVersionMismatch";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kZeroNormVector:
      return "ZeroNormVector";
    case ErrorCode::kInvalidK:
      return "InvalidK";
    case ErrorCode::kEmptyViolatedPool:
      return "EmptyViolatedPool";
    case ErrorCode::kEmptyInput:
      return "EmptyInput";
    case ErrorCode::kInsufficientPairs:
      return "InsufficientPairs";
    case ErrorCode::kUnknownBaseline:
      return "UnknownBaseline";
  }
  return "Unknown";
}

}  // namespace benders
