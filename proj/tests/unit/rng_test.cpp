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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "scsmc/stochastic/rng.hpp"

namespace {

using scsmc::kernel::SimTime;
using namespace scsmc::stochastic;

TEST(RngStream, SameSeedAndIndexReplay) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.seed(), 42u);
  EXPECT_EQ(a.stream_index(), 7u);
}

TEST(RngStream, DistinctStreamsDiffer) {
  RngStream a(42, 0);
  RngStream b(42, 1);
  RngStream c(43, 0);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, NeighbouringStreamsAreUncorrelated) {
  constexpr int n = 100'000;
  RngStream a(1, 100);
  RngStream b(1, 101);
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform();
    const double y = b.uniform();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) * (sbb / n - (sb / n) * (sb / n)));
  EXPECT_LT(std::abs(corr), 0.01);
}

TEST(Bernoulli, DegenerateProbabilities) {
  RngStream s(3, 0);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(bernoulli(s, 0.0), 0);
    ASSERT_EQ(bernoulli(s, 1.0), 1);
  }
}

TEST(Bernoulli, SampleMeanMatchesProbability) {
  RngStream s(5, 0);
  int ones = 0;
  constexpr int n = 100'000;
  for (int i = 0; i < n; ++i) ones += bernoulli(s, 0.9);
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.9, 0.01);
}

TEST(Bernoulli, RejectsInvalidProbability) {
  RngStream s(5, 0);
  EXPECT_THROW(bernoulli(s, -0.1), std::invalid_argument);
  EXPECT_THROW(bernoulli(s, 1.5), std::invalid_argument);
  EXPECT_THROW(bernoulli(s, std::nan("")), std::invalid_argument);
}

TEST(Exponential, MeanOfUnitRate) {
  RngStream s(9, 0);
  constexpr int n = 100'000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += exp_sample(s, 1.0);
  EXPECT_NEAR(sum / n, 1.0, 0.02);
}

TEST(Exponential, Memoryless) {
  RngStream s(11, 0);
  constexpr int n = 400'000;
  int above_a = 0, above_ab = 0, above_b = 0;
  for (int i = 0; i < n; ++i) {
    const double x = exp_sample(s, 1.0);
    above_a += x > 1.0;
    above_ab += x > 2.0;
    above_b += x > 1.0;
  }
  const double conditional = static_cast<double>(above_ab) / above_a;
  const double marginal = static_cast<double>(above_b) / n;
  EXPECT_NEAR(conditional, marginal, 0.02);
}

TEST(Exponential, DelayUsesCeilingWithOneTickFloor) {
  RngStream s(13, 0);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(exp_delay(s, 1e12, SimTime{10}).ticks(), 1u);
  RngStream a(17, 0);
  RngStream b(17, 0);
  for (int i = 0; i < 1000; ++i) {
    const double units = exp_sample(a, 0.5);
    const auto ticks = exp_delay(b, 0.5, SimTime{1000}).ticks();
    ASSERT_EQ(ticks, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(units * 1000))));
  }
}

TEST(Exponential, RejectsNonPositiveRate) {
  RngStream s(1, 0);
  EXPECT_THROW(exp_sample(s, 0.0), std::invalid_argument);
  EXPECT_THROW(exp_delay(s, -1.0, SimTime{1}), std::invalid_argument);
}

}  // namespace
