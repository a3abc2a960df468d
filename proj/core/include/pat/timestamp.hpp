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
#ifndef PAT_TIMESTAMP_HPP_
#define PAT_TIMESTAMP_HPP_

#include <chrono>
#include <string>
#include <string_view>

namespace pat {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();

// ISO-8601 UTC with millisecond precision: 2026-10-15T08:30:00.000Z
std::string format_timestamp(Timestamp t);
// Accepts exactly the format above. Throws kInvalidArgument.
Timestamp parse_timestamp(std::string_view text);

}  // namespace pat

#endif  // PAT_TIMESTAMP_HPP_
