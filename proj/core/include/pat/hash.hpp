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
#ifndef PAT_HASH_HPP_
#define PAT_HASH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pat {

// Lower-case hex SHA-256.
std::string content_hash(std::span<const std::uint8_t> bytes);
std::string content_hash(std::string_view text);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Ignores ASCII whitespace. Throws kInvalidArgument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Cryptographically random bytes rendered as hex.
std::string random_hex(std::size_t bytes);

}  // namespace pat

#endif  // PAT_HASH_HPP_
