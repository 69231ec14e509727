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

#include "scsmc/smc/smc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scsmc/smc/parallel.hpp"

namespace scsmc::smc {

namespace {

// Slack for comparing computed error probabilities against alpha/beta.
constexpr double kTailTolerance = 1e-12;

double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
  if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) +
         (nn - kk) * std::log1p(-p);
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::H0Accepted: return "H0Accepted";
    case Decision::H1Accepted: return "H1Accepted";
    case Decision::Undecided: return "Undecided";
  }
  return "?";
}

void TestParams::validate() const {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!(p1() >= 0.0 && p0() <= 1.0)) throw ParameterError("indifference region [theta-delta, theta+delta] must lie in [0,1]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0,1)");
}

double MeanEstimate::standard_error() const { return n == 0 ? 0.0 : stddev / std::sqrt(static_cast<double>(n)); }

std::uint64_t chernoff_n(double delta, double alpha) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / alpha) / (2.0 * delta * delta)));
}

Estimate estimate_probability(const VerdictSampler& sampler, double delta, double alpha, unsigned workers) {
  const std::uint64_t n = chernoff_n(delta, alpha);
  const auto verdicts = parallel_map<bool>(0, n, workers, sampler);
  const auto successes = static_cast<std::uint64_t>(std::count(verdicts.begin(), verdicts.end(), true));
  return Estimate{static_cast<double>(successes) / static_cast<double>(n), n, successes, delta, alpha};
}

double sprt_log_ratio(const TestParams& params, std::uint64_t m, std::uint64_t d) {
  const double p0 = params.p0();
  const double p1 = params.p1();
  const double failures = static_cast<double>(m - d);
  double l = 0.0;
  if (d > 0) l += static_cast<double>(d) * std::log(p1 / p0);
  if (failures > 0) l += failures * std::log((1.0 - p1) / (1.0 - p0));
  return l;
}

Verdict sprt(const VerdictSampler& sampler, const TestParams& params, std::uint64_t cap, unsigned workers) {
  params.validate();
  if (cap == 0) cap = 10 * chernoff_n(params.delta, params.alpha);
  const double accept_h1 = std::log((1.0 - params.beta) / params.alpha);
  const double accept_h0 = std::log(params.beta / (1.0 - params.alpha));
  const std::uint64_t batch = std::max(1u, workers);

  Verdict v;
  while (v.samples_used < cap) {
    const std::uint64_t count = std::min<std::uint64_t>(batch, cap - v.samples_used);
    const auto outcomes = parallel_map<bool>(v.samples_used, count, workers, sampler);
    for (bool b : outcomes) {
      ++v.samples_used;
      if (b) ++v.successes;
      const double l = sprt_log_ratio(params, v.samples_used, v.successes);
      if (l >= accept_h1) {
        v.decision = Decision::H1Accepted;
        return v;
      }
      if (l <= accept_h0) {
        v.decision = Decision::H0Accepted;
        return v;
      }
    }
  }
  v.decision = Decision::Undecided;
  return v;
}

double binomial_cdf(std::int64_t c, std::uint64_t n, double p) {
  if (c < 0) return 0.0;
  if (static_cast<std::uint64_t>(c) >= n) return 1.0;
  double sum = 0.0;
  for (std::uint64_t k = 0; k <= static_cast<std::uint64_t>(c); ++k) sum += std::exp(log_binomial_pmf(k, n, p));
  return std::min(1.0, sum);
}

SamplingPlan single_sampling_plan(const TestParams& params, std::uint64_t max_n) {
  params.validate();
  const double p0 = params.p0();
  const double p1 = params.p1();
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    // Largest c whose type-I error P[X <= c | p0] stays within alpha.
    std::int64_t c = -1;
    double lower_tail_p0 = 0.0;
    double lower_tail_p1 = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      const double next = lower_tail_p0 + std::exp(log_binomial_pmf(k, n, p0));
      if (next > params.alpha + kTailTolerance) break;
      lower_tail_p0 = next;
      lower_tail_p1 += std::exp(log_binomial_pmf(k, n, p1));
      c = static_cast<std::int64_t>(k);
    }
    const double type_two = 1.0 - std::min(1.0, lower_tail_p1);
    if (type_two <= params.beta + kTailTolerance) return SamplingPlan{n, c};
  }
  throw ParameterError("no single sampling plan with n <= " + std::to_string(max_n));
}

Verdict decide_ssp(const SamplingPlan& plan, std::uint64_t successes) {
  Verdict v;
  v.samples_used = plan.n;
  v.successes = successes;
  v.decision = static_cast<std::int64_t>(successes) > plan.c ? Decision::H0Accepted : Decision::H1Accepted;
  return v;
}

Verdict run_ssp(const VerdictSampler& sampler, const SamplingPlan& plan, unsigned workers) {
  const auto outcomes = parallel_map<bool>(0, plan.n, workers, sampler);
  return decide_ssp(plan, static_cast<std::uint64_t>(std::count(outcomes.begin(), outcomes.end(), true)));
}

MeanEstimate estimate_mean(const ValueSampler& sampler, std::uint64_t n, unsigned workers) {
  if (n == 0) throw ParameterError("mean estimate needs at least one sample");
  const auto values = parallel_map<double>(0, n, workers, sampler);
  // Welford's update, in index order.
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t k = 0;
  for (double x : values) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  MeanEstimate e;
  e.mean = mean;
  e.n = n;
  e.stddev = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  return e;
}

}  // namespace scsmc::smc
