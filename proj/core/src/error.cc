// Copyright 2026 The edgecache Authors
//
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

#include "edgecache/error.h"

namespace edgecache {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter:
      return "invalid-parameter";
    case ErrorCode::kIndexOutOfRange:
      return "index-out-of-range";
    case ErrorCode::kInsufficientHistory:
      return "insufficient-history";
    case ErrorCode::kInfeasibleAction:
      return "infeasible-action";
    case ErrorCode::kMultiCopyState:
      return "multi-copy-state";
    case ErrorCode::kNonUnitSize:
      return "non-unit-size";
    case ErrorCode::kInfeasibleFlow:
      return "infeasible-flow";
    case ErrorCode::kInstanceTooLarge:
      return "instance-too-large";
    case ErrorCode::kOverflow:
      return "overflow";
    case ErrorCode::kParseError:
      return "parse-error";
    case ErrorCode::kValidationError:
      return "validation-error";
    case ErrorCode::kIoError:
      return "io-error";
  }
  return "unknown";
}

}  // namespace edgecache
