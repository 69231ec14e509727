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
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "scsmc/monitor/trace.hpp"

namespace scsmc::bltl {

/// Exact decimal constant: mantissa x 10^-exponent.
struct Decimal {
  std::int64_t mantissa = 0;
  int exponent = 0;

  static Decimal integer(std::int64_t v) { return Decimal{v, 0}; }
  double to_double() const;
  std::string to_string() const;
  friend bool operator==(const Decimal&, const Decimal&) = default;
};

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view to_string(Cmp cmp);

struct Bound {
  enum class Kind { Time, Steps };
  Kind kind = Kind::Steps;
  /// Steps: the step count. Time: model time units.
  Decimal amount{};
  /// Steps: the step count. Time: ticks, filled in by bind(); before binding
  /// one time unit counts as one tick (truncated).
  std::uint64_t limit = 0;

  static Bound steps(std::uint64_t k);
  static Bound time(Decimal units);
  static Bound time(std::uint64_t units) { return time(Decimal::integer(static_cast<std::int64_t>(units))); }
  friend bool operator==(const Bound& a, const Bound& b) { return a.kind == b.kind && a.amount == b.amount; }
};

enum class Op { True, False, Atom, Not, And, Or, Implies, Until, Eventually, Globally };

struct Atom {
  std::string variable;
  Cmp cmp = Cmp::Ne;
  Decimal constant{};
  /// Index into the bound schema; -1 until bind().
  int var_index = -1;
  /// Scale of the variable (raw / scale = value); set by bind().
  std::int64_t scale = 1;
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.variable == b.variable && a.cmp == b.cmp && a.constant == b.constant;
  }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

/// BLTL syntax node. Immutable once built; subtrees are shared.
struct Node {
  Op op = Op::True;
  Atom atom{};
  Bound bound{};
  Formula lhs;
  Formula rhs;
};

Formula make_true();
Formula make_false();
Formula make_atom(std::string variable, Cmp cmp, Decimal constant);
Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_implies(Formula a, Formula b);
Formula make_until(Bound b, Formula lhs, Formula rhs);
Formula make_eventually(Bound b, Formula f);
Formula make_globally(Bound b, Formula f);

bool structurally_equal(const Formula& a, const Formula& b);

/// Fully parenthesized concrete syntax that parse() reads back.
std::string to_string(const Formula& f);

/// `X<=B var`: value of `var` once the bound is reached.
struct RewardQuery {
  Bound bound{};
  std::string variable;
  int var_index = -1;
  std::int64_t scale = 1;
  friend bool operator==(const RewardQuery& a, const RewardQuery& b) {
    return a.bound == b.bound && a.variable == b.variable;
  }
};

std::string to_string(const RewardQuery& q);

using Query = std::variant<Formula, RewardQuery>;

class UnknownVariable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Resolves atom variables against `schema` and time bounds to ticks.
/// `ticks_per_unit` is the length of one model time unit in ticks.
Formula bind(const Formula& f, const monitor::Schema& schema, std::uint64_t ticks_per_unit);
RewardQuery bind(const RewardQuery& q, const monitor::Schema& schema, std::uint64_t ticks_per_unit);

/// Variables referenced by atoms, in first-occurrence order.
std::vector<std::string> variables(const Formula& f);

struct Horizon {
  /// Nesting sum of time bounds, in model time units.
  double time_units = 0.0;
  /// Nesting sum of time bounds in ticks (meaningful after bind()).
  std::uint64_t time_ticks = 0;
  std::uint64_t steps = 0;
};

Horizon horizon(const Formula& f);

/// Compares raw/scale against the constant exactly.
bool compare(std::int64_t raw, std::int64_t scale, Cmp cmp, const Decimal& constant);

}  // namespace scsmc::bltl
