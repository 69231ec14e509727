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

#include <cstdint>
#include <random>

#include "scsmc/kernel/sim_time.hpp"

namespace scsmc::stochastic {

/// Random stream for one sampled trace. Streams with the same (seed, index)
/// replay the same draws; distinct indices are seeded through a SplitMix64
/// mix of both values so neighbouring traces do not share state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return index_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

/// Returns 1 with probability p.
int bernoulli(RngStream& stream, double p);

/// Exponential sample with `rate` events per time unit, converted to ticks
/// by ceiling (never below one tick). `time_unit` is the duration of one
/// time unit in kernel ticks.
kernel::SimTime exp_delay(RngStream& stream, double rate, kernel::SimTime time_unit);

/// The continuous Exp(rate) draw in time units, before tick conversion.
double exp_sample(RngStream& stream, double rate);

}  // namespace scsmc::stochastic
