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
#include <functional>
#include <stdexcept>
#include <string_view>

namespace scsmc::smc {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Draws the verdict of the trace with the given index. Trace i must use
/// its own random substream so draws are independent.
using VerdictSampler = std::function<bool(std::uint64_t trace_index)>;
/// Draws a real-valued per-trace observation (for example a reward).
using ValueSampler = std::function<double(std::uint64_t trace_index)>;

/// Hypothesis test H0: p >= theta + delta against H1: p <= theta - delta.
struct TestParams {
  double theta = 0.5;
  double delta = 0.05;
  double alpha = 0.05;
  double beta = 0.05;

  double p0() const { return theta + delta; }
  double p1() const { return theta - delta; }
  void validate() const;
};

struct Estimate {
  double p_hat = 0.0;
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  double delta = 0.0;
  double alpha = 0.0;
};

enum class Decision { H0Accepted, H1Accepted, Undecided };
std::string_view to_string(Decision d);

struct Verdict {
  Decision decision = Decision::Undecided;
  std::uint64_t samples_used = 0;
  std::uint64_t successes = 0;
};

struct MeanEstimate {
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t n = 0;
  /// Standard error of the mean.
  double standard_error() const;
};

/// Number of samples for which the empirical mean of n Bernoulli draws is
/// within delta of p with probability at least 1 - alpha (two-sided
/// Hoeffding bound, natural log).
std::uint64_t chernoff_n(double delta, double alpha);

Estimate estimate_probability(const VerdictSampler& sampler, double delta, double alpha, unsigned workers = 1);

/// Wald's log-likelihood ratio after m samples with d successes.
double sprt_log_ratio(const TestParams& params, std::uint64_t m, std::uint64_t d);

/// Sequential probability ratio test. Samples are consumed in index order,
/// so the decision does not depend on the worker count. Reaching `cap`
/// samples yields Decision::Undecided. A cap of 0 selects
/// 10 x chernoff_n(delta, alpha).
Verdict sprt(const VerdictSampler& sampler, const TestParams& params, std::uint64_t cap = 0, unsigned workers = 1);

struct SamplingPlan {
  std::uint64_t n = 0;
  /// Accept H0 iff more than c successes.
  std::int64_t c = -1;
  friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

/// Smallest-n single sampling plan with error probabilities at most alpha
/// (at p0) and beta (at p1). Throws ParameterError past n = max_n.
SamplingPlan single_sampling_plan(const TestParams& params, std::uint64_t max_n = 1'000'000);

/// Binomial lower tail P[X <= c] for X ~ Bin(n, p).
double binomial_cdf(std::int64_t c, std::uint64_t n, double p);

Verdict run_ssp(const VerdictSampler& sampler, const SamplingPlan& plan, unsigned workers = 1);
Verdict decide_ssp(const SamplingPlan& plan, std::uint64_t successes);

/// Mean of n per-trace observations.
MeanEstimate estimate_mean(const ValueSampler& sampler, std::uint64_t n, unsigned workers = 1);

}  // namespace scsmc::smc
