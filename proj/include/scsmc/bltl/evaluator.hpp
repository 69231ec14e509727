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
#include <optional>
#include <stdexcept>
#include <vector>

#include "scsmc/bltl/formula.hpp"
#include "scsmc/monitor/trace.hpp"

namespace scsmc::bltl {

class InsufficientTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decides `f` (bound to the trace's schema) on the suffix of `trace`
/// starting at `k`. Throws InsufficientTrace when the verdict depends on
/// states beyond the end of an incomplete trace; on a complete trace there
/// is nothing beyond the last state.
bool evaluate(const monitor::Trace& trace, const Formula& f, std::size_t k = 0);

/// Evaluates a formula without temporal operators on a single state.
bool evaluate_state(const monitor::TimedState& state, const Formula& f);

enum class Verdict { Undecided, True, False };

/// Incremental evaluator: feed states in time order and get a verdict as
/// soon as the prefix seen so far settles it. Three-valued (Kleene)
/// evaluation with per-position memoization, so each state is scanned a
/// bounded number of times.
class OnlineEvaluator {
 public:
  /// `f` must be bound.
  explicit OnlineEvaluator(const Formula& f);

  Verdict push(const monitor::TimedState& state);

  /// Call when the stream ends. With `complete`, the trace is known to have
  /// no further states and the verdict is always determined; otherwise an
  /// undecided formula raises InsufficientTrace.
  Verdict finish(bool complete);

  Verdict verdict() const { return verdict_; }
  std::size_t states_consumed() const { return states_.size(); }

 private:
  enum : std::int8_t { kFalse = 0, kTrue = 1, kUnknown = 2 };

  struct CoreNode {
    Op op;  // True, False, Atom, Not, And, Or, Until only
    Atom atom;
    Bound bound;
    int lhs = -1;
    int rhs = -1;
  };

  struct Memo {
    std::int8_t value = kUnknown;
    std::uint32_t cursor = 0;
  };

  int lower(const Formula& f);
  std::int8_t eval(int node, std::size_t k);
  std::int8_t eval_until(int node, std::size_t k);

  std::vector<CoreNode> nodes_;
  std::vector<std::vector<Memo>> memo_;
  std::vector<monitor::TimedState> states_;
  int root_ = -1;
  bool complete_ = false;
  Verdict verdict_ = Verdict::Undecided;
};

/// Online evaluator for `X<=B var`: the value of `var` in the last state
/// within the bound.
class RewardProbe {
 public:
  explicit RewardProbe(const RewardQuery& q);

  /// Returns the value (raw / scale) once determined.
  std::optional<double> push(const monitor::TimedState& state);
  std::optional<double> finish(bool complete);
  std::optional<double> value() const { return value_; }

 private:
  RewardQuery query_;
  std::size_t seen_ = 0;
  kernel::SimTime start_{};
  std::optional<std::int64_t> last_within_;
  std::optional<double> value_;
};

}  // namespace scsmc::bltl
