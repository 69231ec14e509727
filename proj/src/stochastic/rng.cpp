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

#include "scsmc/stochastic/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scsmc::stochastic {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= index * 0xD1B54A32D192ED03ULL;
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), index_(stream_index), engine_(make_engine(seed, stream_index)) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int bernoulli(RngStream& stream, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli probability outside [0,1]");
  return stream.uniform() < p ? 1 : 0;
}

double exp_sample(RngStream& stream, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential rate must be positive");
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-stream.uniform()) / rate;
}

kernel::SimTime exp_delay(RngStream& stream, double rate, kernel::SimTime time_unit) {
  const double units = exp_sample(stream, rate);
  const long double ticks = std::ceil(static_cast<long double>(units) * time_unit.ticks());
  if (ticks >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    return kernel::SimTime::max();
  }
  return kernel::SimTime{std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ticks))};
}

}  // namespace scsmc::stochastic
