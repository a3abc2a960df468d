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
#include "pat/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "pat/error.hpp"

namespace pat {

Timestamp now_utc() {
  return std::chrono::floor<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss<milliseconds> tod{t - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()),
                static_cast<int>(tod.subseconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  auto fail = [&]() -> Timestamp {
    throw Error(ErrorCode::kInvalidArgument,
                "bad timestamp '" + std::string(text) + "'");
  };
  // YYYY-MM-DDTHH:MM:SS.mmmZ
  if (text.size() != 24 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != '.' || text[23] != 'Z') {
    return fail();
  }
  auto field = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    const auto* begin = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(begin, begin + len, v);
    if (ec != std::errc() || ptr != begin + len) fail();
    return v;
  };
  const year_month_day ymd{year{field(0, 4)}, month{unsigned(field(5, 2))},
                           day{unsigned(field(8, 2))}};
  const int hh = field(11, 2), mm = field(14, 2), ss = field(17, 2);
  const int ms = field(20, 3);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) return fail();
  return sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{ms};
}

}  // namespace pat
