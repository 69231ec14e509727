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

#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scsmc::kernel {

enum class TimeUnit { FS, PS, NS, US, MS, S };

/// Femtoseconds per unit.
constexpr std::uint64_t femtoseconds(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::FS: return 1ULL;
    case TimeUnit::PS: return 1'000ULL;
    case TimeUnit::NS: return 1'000'000ULL;
    case TimeUnit::US: return 1'000'000'000ULL;
    case TimeUnit::MS: return 1'000'000'000'000ULL;
    case TimeUnit::S: return 1'000'000'000'000'000ULL;
  }
  return 1ULL;
}

std::string_view to_string(TimeUnit unit);
TimeUnit parse_time_unit(std::string_view text);

class TimeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A point or duration on the kernel clock, counted in whole ticks of the
/// kernel's resolution.
class SimTime {
 public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::uint64_t ticks) : ticks_(ticks) {}

  static constexpr SimTime zero() { return SimTime{}; }
  static constexpr SimTime max() { return SimTime{std::numeric_limits<std::uint64_t>::max()}; }

  constexpr std::uint64_t ticks() const { return ticks_; }
  constexpr bool is_zero() const { return ticks_ == 0; }

  SimTime& operator+=(SimTime other) {
    if (ticks_ > std::numeric_limits<std::uint64_t>::max() - other.ticks_) {
      throw TimeOverflow("simulation time overflow");
    }
    ticks_ += other.ticks_;
    return *this;
  }
  friend SimTime operator+(SimTime a, SimTime b) { return a += b; }
  friend SimTime operator-(SimTime a, SimTime b) {
    if (b.ticks_ > a.ticks_) throw std::underflow_error("negative simulation time");
    return SimTime{a.ticks_ - b.ticks_};
  }

  friend constexpr auto operator<=>(SimTime, SimTime) = default;

 private:
  std::uint64_t ticks_ = 0;
};

/// The smallest representable quantum of time: `magnitude` x `unit`, with
/// magnitude a power of ten (1, 10, 100).
struct Resolution {
  std::uint64_t magnitude = 1;
  TimeUnit unit = TimeUnit::NS;

  std::uint64_t tick_femtoseconds() const { return magnitude * femtoseconds(unit); }

  /// Converts `count` x `u` to ticks, rounding anything finer than one tick
  /// down.
  SimTime ticks(std::uint64_t count, TimeUnit u) const;
  SimTime ticks(double count, TimeUnit u) const;
};

std::string to_string(SimTime t);

}  // namespace scsmc::kernel
