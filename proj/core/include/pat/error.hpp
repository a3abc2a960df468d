/* Copyright 2026 The pat Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef PAT_ERROR_HPP_
#define PAT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pat {

enum class ErrorCode {
  kInvalidArgument,
  kUnsupportedFormat,
  kDecodeError,
  kDimensionMismatch,
  kNonFiniteInput,
  kInvalidAmount,
  kDuplicateId,
  kNoFiltersEnabled,
  kSpawnError,
  kTimeout,
  kProtocolError,
  kPluginReportedError,
  kAllZeroMap,
  kStoreIo,
  kNotFound,
  kUnknownSection,
  kConfigError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI exit codes, HTTP status mapping) can dispatch without parsing
// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pat

#endif  // PAT_ERROR_HPP_
