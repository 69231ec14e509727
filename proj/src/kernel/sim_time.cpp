/*
 * Copyright 2026 The scsmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scsmc/kernel/sim_time.hpp"

#include <cctype>
#include <cmath>

namespace scsmc::kernel {

std::string_view to_string(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::FS: return "FS";
    case TimeUnit::PS: return "PS";
    case TimeUnit::NS: return "NS";
    case TimeUnit::US: return "US";
    case TimeUnit::MS: return "MS";
    case TimeUnit::S: return "S";
  }
  return "?";
}

TimeUnit parse_time_unit(std::string_view text) {
  std::string upper;
  for (char c : text) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper.starts_with("SC_")) upper.erase(0, 3);
  if (upper == "FS") return TimeUnit::FS;
  if (upper == "PS") return TimeUnit::PS;
  if (upper == "NS") return TimeUnit::NS;
  if (upper == "US") return TimeUnit::US;
  if (upper == "MS") return TimeUnit::MS;
  if (upper == "S" || upper == "SEC") return TimeUnit::S;
  throw std::invalid_argument("unknown time unit '" + std::string(text) + "'");
}

SimTime Resolution::ticks(std::uint64_t count, TimeUnit u) const {
  const std::uint64_t unit_fs = femtoseconds(u);
  const std::uint64_t tick_fs = tick_femtoseconds();
  // count * unit_fs / tick_fs without intermediate overflow
  const unsigned __int128 total = static_cast<unsigned __int128>(count) * unit_fs / tick_fs;
  if (total > std::numeric_limits<std::uint64_t>::max()) throw TimeOverflow("duration overflows tick counter");
  return SimTime{static_cast<std::uint64_t>(total)};
}

SimTime Resolution::ticks(double count, TimeUnit u) const {
  if (!(count >= 0.0)) throw std::invalid_argument("negative or NaN duration");
  const long double exact =
      static_cast<long double>(count) * static_cast<long double>(femtoseconds(u)) / tick_femtoseconds();
  if (exact >= 18446744073709551615.0L) throw TimeOverflow("duration overflows tick counter");
  return SimTime{static_cast<std::uint64_t>(std::floor(exact))};
}

std::string to_string(SimTime t) { return std::to_string(t.ticks()); }

}  // namespace scsmc::kernel
