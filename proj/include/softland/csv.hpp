// Copyright 2026 The softland Authors
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

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <type_traits>

namespace softland::csv {

/// 17 significant digits, enough for an exact double round trip. Negative
/// zero prints as 0.
inline std::string num(double value) {
  if (value == 0.0) value = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline std::string num(int value) { return std::to_string(value); }
inline std::string num(bool value) { return value ? "1" : "0"; }

/// Writes one comma-separated row terminated by '\n'.
template <class... Ts>
void row(std::ostream& out, const Ts&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) out << ',';
    first = false;
    if constexpr (std::is_arithmetic_v<std::decay_t<decltype(f)>>) {
      out << num(f);
    } else {
      out << f;
    }
  };
  (put(fields), ...);
  out << '\n';
}

}  // namespace softland::csv
