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

#ifndef EDGECACHE_ERROR_H_
#define EDGECACHE_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edgecache {

// Delivery and penalty costs are integral cost units. Demand weights carry
// their own fixed-point scale (see StageProblem), so every objective value
// is an exact integer.
using Cost = std::int64_t;

enum class ErrorCode {
  kInvalidParameter,
  kIndexOutOfRange,
  kInsufficientHistory,
  kInfeasibleAction,
  kMultiCopyState,
  kNonUnitSize,
  kInfeasibleFlow,
  kInstanceTooLarge,
  kOverflow,
  kParseError,
  kValidationError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(code, message) when `condition` is false.
inline void Require(bool condition, ErrorCode code,
                    const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace edgecache

#endif  // EDGECACHE_ERROR_H_
