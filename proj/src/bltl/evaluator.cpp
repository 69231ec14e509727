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

#include "scsmc/bltl/evaluator.hpp"

namespace scsmc::bltl {

namespace {

bool atom_holds(const monitor::TimedState& s, const Atom& a) {
  if (a.var_index < 0) throw UnknownVariable("atom '" + a.variable + "' is not bound to a schema");
  return compare(s.values.at(static_cast<std::size_t>(a.var_index)), a.scale, a.cmp, a.constant);
}

bool until_holds(const monitor::Trace& trace, const Bound& bound, const Formula* lhs, const Formula& rhs,
                 std::size_t k) {
  const auto& states = trace.states;
  for (std::size_t i = 0;; ++i) {
    if (bound.kind == Bound::Kind::Steps && i > bound.limit) return false;
    const std::size_t idx = k + i;
    if (idx >= states.size()) {
      if (trace.complete) return false;
      throw InsufficientTrace("trace ends before the bound of an until operator is reached");
    }
    if (bound.kind == Bound::Kind::Time && (states[idx].time - states[k].time).ticks() > bound.limit) return false;
    if (evaluate(trace, rhs, idx)) return true;
    if (lhs && !evaluate(trace, *lhs, idx)) return false;
  }
}

}  // namespace

bool evaluate(const monitor::Trace& trace, const Formula& f, std::size_t k) {
  if (k >= trace.states.size()) throw InsufficientTrace("no state at trace position " + std::to_string(k));
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return atom_holds(trace.states[k], f->atom);
    case Op::Not: return !evaluate(trace, f->lhs, k);
    case Op::And: return evaluate(trace, f->lhs, k) && evaluate(trace, f->rhs, k);
    case Op::Or: return evaluate(trace, f->lhs, k) || evaluate(trace, f->rhs, k);
    case Op::Implies: return !evaluate(trace, f->lhs, k) || evaluate(trace, f->rhs, k);
    case Op::Until: return until_holds(trace, f->bound, &f->lhs, f->rhs, k);
    case Op::Eventually: return until_holds(trace, f->bound, nullptr, f->lhs, k);
    case Op::Globally: {
      // G<=B f = !F<=B !f
      const Formula negated = make_not(f->lhs);
      return !until_holds(trace, f->bound, nullptr, negated, k);
    }
  }
  return false;
}

bool evaluate_state(const monitor::TimedState& state, const Formula& f) {
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return atom_holds(state, f->atom);
    case Op::Not: return !evaluate_state(state, f->lhs);
    case Op::And: return evaluate_state(state, f->lhs) && evaluate_state(state, f->rhs);
    case Op::Or: return evaluate_state(state, f->lhs) || evaluate_state(state, f->rhs);
    case Op::Implies: return !evaluate_state(state, f->lhs) || evaluate_state(state, f->rhs);
    default: throw std::invalid_argument("temporal operator in a state predicate");
  }
}

// ---------------------------------------------------------------------------

OnlineEvaluator::OnlineEvaluator(const Formula& f) {
  root_ = lower(f);
  memo_.resize(nodes_.size());
}

int OnlineEvaluator::lower(const Formula& f) {
  auto add = [this](CoreNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
  };
  switch (f->op) {
    case Op::True: return add({Op::True, {}, {}});
    case Op::False: return add({Op::False, {}, {}});
    case Op::Atom:
      if (f->atom.var_index < 0) throw UnknownVariable("atom '" + f->atom.variable + "' is not bound to a schema");
      return add({Op::Atom, f->atom, {}});
    case Op::Not: {
      const int c = lower(f->lhs);
      return add({Op::Not, {}, {}, c});
    }
    case Op::And:
    case Op::Or: {
      const int a = lower(f->lhs);
      const int b = lower(f->rhs);
      return add({f->op, {}, {}, a, b});
    }
    case Op::Implies: {
      const int a = lower(f->lhs);
      const int na = add({Op::Not, {}, {}, a});
      const int b = lower(f->rhs);
      return add({Op::Or, {}, {}, na, b});
    }
    case Op::Until: {
      const int a = lower(f->lhs);
      const int b = lower(f->rhs);
      return add({Op::Until, {}, f->bound, a, b});
    }
    case Op::Eventually: {
      const int t = add({Op::True, {}, {}});
      const int b = lower(f->lhs);
      return add({Op::Until, {}, f->bound, t, b});
    }
    case Op::Globally: {
      const int t = add({Op::True, {}, {}});
      const int c = lower(f->lhs);
      const int nc = add({Op::Not, {}, {}, c});
      const int u = add({Op::Until, {}, f->bound, t, nc});
      return add({Op::Not, {}, {}, u});
    }
  }
  throw std::logic_error("unreachable formula operator");
}

namespace {

std::int8_t not3(std::int8_t v) { return v == 2 ? 2 : static_cast<std::int8_t>(1 - v); }
std::int8_t and3(std::int8_t a, std::int8_t b) {
  if (a == 0 || b == 0) return 0;
  if (a == 1 && b == 1) return 1;
  return 2;
}
std::int8_t or3(std::int8_t a, std::int8_t b) {
  if (a == 1 || b == 1) return 1;
  if (a == 0 && b == 0) return 0;
  return 2;
}

}  // namespace

std::int8_t OnlineEvaluator::eval(int node, std::size_t k) {
  auto& column = memo_[static_cast<std::size_t>(node)];
  if (column.size() <= k) column.resize(states_.size());
  if (column[k].value != kUnknown) return column[k].value;

  const CoreNode& n = nodes_[static_cast<std::size_t>(node)];
  std::int8_t v = kUnknown;
  switch (n.op) {
    case Op::True: v = kTrue; break;
    case Op::False: v = kFalse; break;
    case Op::Atom: v = atom_holds(states_[k], n.atom) ? kTrue : kFalse; break;
    case Op::Not: v = not3(eval(n.lhs, k)); break;
    case Op::And: {
      v = eval(n.lhs, k);
      if (v != kFalse) v = and3(v, eval(n.rhs, k));
      break;
    }
    case Op::Or: {
      v = eval(n.lhs, k);
      if (v != kTrue) v = or3(v, eval(n.rhs, k));
      break;
    }
    case Op::Until: v = eval_until(node, k); break;
    default: throw std::logic_error("non-core operator in online evaluator");
  }
  // eval_until may have resized the column; index again.
  if (v != kUnknown) memo_[static_cast<std::size_t>(node)][k].value = v;
  return v;
}

std::int8_t OnlineEvaluator::eval_until(int node, std::size_t k) {
  const CoreNode& n = nodes_[static_cast<std::size_t>(node)];
  const bool steps = n.bound.kind == Bound::Kind::Steps;
  std::uint32_t cursor = memo_[static_cast<std::size_t>(node)][k].cursor;
  // Positions before the cursor had rhs false and lhs true.
  std::int8_t acc = kFalse;
  std::int8_t prefix = kTrue;
  std::int8_t result = kUnknown;
  for (std::uint64_t i = cursor;; ++i) {
    if (steps && i > n.bound.limit) {
      result = acc;
      break;
    }
    const std::size_t idx = k + static_cast<std::size_t>(i);
    if (idx >= states_.size()) {
      if (complete_ || prefix == kFalse) {
        result = acc;
      } else {
        result = acc == kTrue ? kTrue : kUnknown;
      }
      break;
    }
    if (!steps && (states_[idx].time - states_[k].time).ticks() > n.bound.limit) {
      result = acc;
      break;
    }
    acc = or3(acc, and3(eval(n.rhs, idx), prefix));
    if (acc == kTrue) {
      result = kTrue;
      break;
    }
    prefix = and3(prefix, eval(n.lhs, idx));
    if (prefix == kFalse) {
      result = acc;
      break;
    }
    if (acc == kFalse && prefix == kTrue) cursor = static_cast<std::uint32_t>(i + 1);
  }
  memo_[static_cast<std::size_t>(node)][k].cursor = cursor;
  return result;
}

Verdict OnlineEvaluator::push(const monitor::TimedState& state) {
  if (verdict_ != Verdict::Undecided) return verdict_;
  if (!states_.empty() && state.time < states_.back().time) {
    throw std::invalid_argument("states must arrive in non-decreasing time order");
  }
  states_.push_back(state);
  const std::int8_t v = eval(root_, 0);
  if (v != kUnknown) verdict_ = v == kTrue ? Verdict::True : Verdict::False;
  return verdict_;
}

Verdict OnlineEvaluator::finish(bool complete) {
  if (verdict_ != Verdict::Undecided) return verdict_;
  if (!complete) throw InsufficientTrace("state stream ended before the formula was decided");
  if (states_.empty()) throw InsufficientTrace("empty trace");
  complete_ = true;
  const std::int8_t v = eval(root_, 0);
  verdict_ = v == kTrue ? Verdict::True : Verdict::False;
  return verdict_;
}

// ---------------------------------------------------------------------------

RewardProbe::RewardProbe(const RewardQuery& q) : query_(q) {
  if (q.var_index < 0) throw UnknownVariable("reward variable '" + q.variable + "' is not bound to a schema");
}

std::optional<double> RewardProbe::push(const monitor::TimedState& state) {
  if (value_) return value_;
  const std::int64_t raw = state.values.at(static_cast<std::size_t>(query_.var_index));
  const bool first = seen_ == 0;
  if (first) start_ = state.time;
  bool within;
  if (query_.bound.kind == Bound::Kind::Steps) {
    within = seen_ <= query_.bound.limit;
  } else {
    within = (state.time - start_).ticks() <= query_.bound.limit;
  }
  ++seen_;
  if (within) {
    last_within_ = raw;
    if (query_.bound.kind == Bound::Kind::Steps && seen_ == query_.bound.limit + 1) {
      value_ = static_cast<double>(raw) / static_cast<double>(query_.scale);
    }
  } else {
    value_ = static_cast<double>(*last_within_) / static_cast<double>(query_.scale);
  }
  return value_;
}

std::optional<double> RewardProbe::finish(bool complete) {
  if (value_) return value_;
  if (!complete || !last_within_) throw InsufficientTrace("state stream ended before the reward bound was reached");
  value_ = static_cast<double>(*last_within_) / static_cast<double>(query_.scale);
  return value_;
}

}  // namespace scsmc::bltl
