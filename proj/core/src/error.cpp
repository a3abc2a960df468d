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
#include "pat/error.hpp"

namespace pat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kInvalidAmount: return "InvalidAmount";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kNoFiltersEnabled: return "NoFiltersEnabled";
    case ErrorCode::kSpawnError: return "SpawnError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kPluginReportedError: return "PluginReportedError";
    case ErrorCode::kAllZeroMap: return "AllZeroMap";
    case ErrorCode::kStoreIo: return "StoreIo";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnknownSection: return "UnknownSection";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace pat
