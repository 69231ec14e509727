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

#include "scsmc/bltl/formula.hpp"

#include <algorithm>
#include <cmath>

namespace scsmc::bltl {

namespace {

__int128 pow10(int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

std::uint64_t ticks_of(const Decimal& units, std::uint64_t ticks_per_unit) {
  if (units.mantissa < 0) throw std::invalid_argument("negative time bound");
  const __int128 t = static_cast<__int128>(units.mantissa) * ticks_per_unit / pow10(units.exponent);
  if (t > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("time bound overflows tick counter");
  }
  return static_cast<std::uint64_t>(t);
}

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

std::string bound_text(const Bound& b) {
  return b.kind == Bound::Kind::Steps ? "#" + std::to_string(b.limit) : b.amount.to_string();
}

}  // namespace

double Decimal::to_double() const { return static_cast<double>(mantissa) / std::pow(10.0, exponent); }

std::string Decimal::to_string() const {
  if (exponent == 0) return std::to_string(mantissa);
  const bool negative = mantissa < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(mantissa + 1)) + 1 : static_cast<std::uint64_t>(mantissa);
  std::string digits = std::to_string(magnitude);
  while (digits.size() <= static_cast<std::size_t>(exponent)) digits.insert(digits.begin(), '0');
  digits.insert(digits.end() - exponent, '.');
  return (negative ? "-" : "") + digits;
}

std::string_view to_string(Cmp cmp) {
  switch (cmp) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

Bound Bound::steps(std::uint64_t k) {
  return Bound{Kind::Steps, Decimal::integer(static_cast<std::int64_t>(k)), k};
}

Bound Bound::time(Decimal units) { return Bound{Kind::Time, units, ticks_of(units, 1)}; }

Formula make_true() { return make(Node{.op = Op::True}); }
Formula make_false() { return make(Node{.op = Op::False}); }

Formula make_atom(std::string variable, Cmp cmp, Decimal constant) {
  return make(Node{.op = Op::Atom, .atom = Atom{std::move(variable), cmp, constant}});
}

Formula make_not(Formula f) { return make(Node{.op = Op::Not, .lhs = std::move(f)}); }
Formula make_and(Formula a, Formula b) { return make(Node{.op = Op::And, .lhs = std::move(a), .rhs = std::move(b)}); }
Formula make_or(Formula a, Formula b) { return make(Node{.op = Op::Or, .lhs = std::move(a), .rhs = std::move(b)}); }
Formula make_implies(Formula a, Formula b) {
  return make(Node{.op = Op::Implies, .lhs = std::move(a), .rhs = std::move(b)});
}
Formula make_until(Bound b, Formula lhs, Formula rhs) {
  return make(Node{.op = Op::Until, .bound = b, .lhs = std::move(lhs), .rhs = std::move(rhs)});
}
Formula make_eventually(Bound b, Formula f) { return make(Node{.op = Op::Eventually, .bound = b, .lhs = std::move(f)}); }
Formula make_globally(Bound b, Formula f) { return make(Node{.op = Op::Globally, .bound = b, .lhs = std::move(f)}); }

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::True:
    case Op::False:
      return true;
    case Op::Atom:
      return a->atom == b->atom;
    case Op::Not:
      return structurally_equal(a->lhs, b->lhs);
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    case Op::Until:
      return a->bound == b->bound && structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    case Op::Eventually:
    case Op::Globally:
      return a->bound == b->bound && structurally_equal(a->lhs, b->lhs);
  }
  return false;
}

std::string to_string(const Formula& f) {
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom:
      return "(" + f->atom.variable + " " + std::string(to_string(f->atom.cmp)) + " " + f->atom.constant.to_string() + ")";
    case Op::Not: return "!" + to_string(f->lhs);
    case Op::And: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
    case Op::Or: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
    case Op::Implies: return "(" + to_string(f->lhs) + " => " + to_string(f->rhs) + ")";
    case Op::Until:
      return "(" + to_string(f->lhs) + " U<=" + bound_text(f->bound) + " " + to_string(f->rhs) + ")";
    case Op::Eventually: return "(F<=" + bound_text(f->bound) + " " + to_string(f->lhs) + ")";
    case Op::Globally: return "(G<=" + bound_text(f->bound) + " " + to_string(f->lhs) + ")";
  }
  return "?";
}

std::string to_string(const RewardQuery& q) { return "X<=" + bound_text(q.bound) + " " + q.variable; }

namespace {

Bound bind_bound(Bound b, std::uint64_t ticks_per_unit) {
  if (b.kind == Bound::Kind::Time) b.limit = ticks_of(b.amount, ticks_per_unit);
  return b;
}

}  // namespace

Formula bind(const Formula& f, const monitor::Schema& schema, std::uint64_t ticks_per_unit) {
  Node n = *f;
  if (n.op == Op::Atom) {
    auto idx = schema.index_of(n.atom.variable);
    if (!idx) throw UnknownVariable("formula refers to undeclared variable '" + n.atom.variable + "'");
    n.atom.var_index = static_cast<int>(*idx);
    n.atom.scale = schema.scale(*idx);
  }
  if (n.op == Op::Until || n.op == Op::Eventually || n.op == Op::Globally) n.bound = bind_bound(n.bound, ticks_per_unit);
  if (n.lhs) n.lhs = bltl::bind(n.lhs, schema, ticks_per_unit);
  if (n.rhs) n.rhs = bltl::bind(n.rhs, schema, ticks_per_unit);
  return make(std::move(n));
}

RewardQuery bind(const RewardQuery& q, const monitor::Schema& schema, std::uint64_t ticks_per_unit) {
  RewardQuery out = q;
  auto idx = schema.index_of(q.variable);
  if (!idx) throw UnknownVariable("reward query refers to undeclared variable '" + q.variable + "'");
  out.var_index = static_cast<int>(*idx);
  out.scale = schema.scale(*idx);
  out.bound = bind_bound(q.bound, ticks_per_unit);
  return out;
}

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Formula& n) -> void {
    if (!n) return;
    if (n->op == Op::Atom && std::find(out.begin(), out.end(), n->atom.variable) == out.end()) {
      out.push_back(n->atom.variable);
    }
    self(self, n->lhs);
    self(self, n->rhs);
  };
  walk(walk, f);
  return out;
}

Horizon horizon(const Formula& f) {
  if (!f) return {};
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return {};
    case Op::Not:
      return horizon(f->lhs);
    default:
      break;
  }
  Horizon h = horizon(f->lhs);
  if (f->rhs) {
    const Horizon r = horizon(f->rhs);
    h.time_units = std::max(h.time_units, r.time_units);
    h.time_ticks = std::max(h.time_ticks, r.time_ticks);
    h.steps = std::max(h.steps, r.steps);
  }
  if (f->op == Op::Until || f->op == Op::Eventually || f->op == Op::Globally) {
    if (f->bound.kind == Bound::Kind::Steps) {
      h.steps += f->bound.limit;
    } else {
      h.time_units += f->bound.amount.to_double();
      h.time_ticks += f->bound.limit;
    }
  }
  return h;
}

bool compare(std::int64_t raw, std::int64_t scale, Cmp cmp, const Decimal& constant) {
  const __int128 lhs = static_cast<__int128>(raw) * pow10(constant.exponent);
  const __int128 rhs = static_cast<__int128>(constant.mantissa) * scale;
  switch (cmp) {
    case Cmp::Eq: return lhs == rhs;
    case Cmp::Ne: return lhs != rhs;
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
  }
  return false;
}

}  // namespace scsmc::bltl
