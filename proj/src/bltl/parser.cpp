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

#include "scsmc/bltl/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace scsmc::bltl {

namespace {

enum class Tok { Ident, Number, Char, Hash, LParen, RParen, Bang, Amp, Pipe, Arrow, CmpOp, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
  Cmp cmp = Cmp::Eq;
  Decimal number{};
};

Decimal parse_decimal(std::string_view digits, std::size_t pos) {
  Decimal d;
  bool negative = false;
  std::size_t i = 0;
  if (!digits.empty() && digits[0] == '-') {
    negative = true;
    i = 1;
  }
  bool seen_dot = false;
  __int128 m = 0;
  for (; i < digits.size(); ++i) {
    const char c = digits[i];
    if (c == '.') {
      seen_dot = true;
      continue;
    }
    m = m * 10 + (c - '0');
    if (seen_dot) ++d.exponent;
    if (m > std::numeric_limits<std::int64_t>::max() || d.exponent > 18) {
      throw ParseError(pos, "numeric constant out of range");
    }
  }
  d.mantissa = static_cast<std::int64_t>(negative ? -m : m);
  return d;
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t start, std::size_t len) {
    out.push_back(Token{k, std::string(s.substr(start, len)), start});
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.')) ++i;
      push(Tok::Ident, start, i - start);
      continue;
    }
    const bool negative_number = c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative_number) {
      ++i;
      bool dot = false;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || (s[i] == '.' && !dot))) {
        if (s[i] == '.') {
          if (i + 1 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1]))) break;
          dot = true;
        }
        ++i;
      }
      push(Tok::Number, start, i - start);
      out.back().number = parse_decimal(out.back().text, start);
      continue;
    }
    if (c == '\'') {
      if (i + 2 < s.size() && s[i + 2] == '\'') {
        push(Tok::Char, start, 3);
        out.back().number = Decimal::integer(static_cast<unsigned char>(s[i + 1]));
        i += 3;
        continue;
      }
      throw ParseError(start, "malformed character literal");
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < s.size() && s[i + 1] == b; };
    auto cmp = [&](Cmp k, std::size_t len) {
      push(Tok::CmpOp, start, len);
      out.back().cmp = k;
      i += len;
    };
    if (two('=', '>')) {
      push(Tok::Arrow, start, 2);
      i += 2;
    } else if (two('=', '=')) {
      cmp(Cmp::Eq, 2);
    } else if (two('!', '=')) {
      cmp(Cmp::Ne, 2);
    } else if (two('<', '=')) {
      cmp(Cmp::Le, 2);
    } else if (two('>', '=')) {
      cmp(Cmp::Ge, 2);
    } else if (two('&', '&')) {
      push(Tok::Amp, start, 2);
      i += 2;
    } else if (two('|', '|')) {
      push(Tok::Pipe, start, 2);
      i += 2;
    } else if (c == '=') {
      cmp(Cmp::Eq, 1);
    } else if (c == '<') {
      cmp(Cmp::Lt, 1);
    } else if (c == '>') {
      cmp(Cmp::Gt, 1);
    } else {
      Tok k;
      switch (c) {
        case '#': k = Tok::Hash; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '!': k = Tok::Bang; break;
        case '&': k = Tok::Amp; break;
        case '|': k = Tok::Pipe; break;
        default: throw ParseError(start, std::string("unexpected character '") + c + "'");
      }
      push(k, start, 1);
      ++i;
    }
  }
  out.push_back(Token{Tok::End, "", s.size()});
  return out;
}

Cmp flip(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Query query() {
    if (is_temporal_prefix("X")) {
      pos_ += 2;
      RewardQuery q;
      q.bound = bound();
      const Token& v = expect(Tok::Ident, "reward variable");
      q.variable = v.text;
      expect(Tok::End, "end of input");
      return q;
    }
    Formula f = implies();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      throw ParseError(peek().pos, std::string("expected ") + what + (peek().kind == Tok::End ? " but input ended" : ""));
    }
    return toks_[pos_++];
  }

  bool is_temporal_prefix(std::string_view name) const {
    return peek().kind == Tok::Ident && peek().text == name && peek(1).kind == Tok::CmpOp && peek(1).cmp == Cmp::Le;
  }

  Bound bound() {
    if (peek().kind == Tok::Hash) {
      ++pos_;
      const Token& n = expect(Tok::Number, "step count after '#'");
      if (n.number.exponent != 0 || n.number.mantissa < 0) throw ParseError(n.pos, "step bound must be a non-negative integer");
      return Bound::steps(static_cast<std::uint64_t>(n.number.mantissa));
    }
    const Token& n = expect(Tok::Number, "bound");
    if (n.number.mantissa < 0) throw ParseError(n.pos, "time bound must be non-negative");
    return Bound::time(n.number);
  }

  Formula implies() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return make_implies(lhs, implies());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Pipe) {
      ++pos_;
      f = make_or(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = until();
    while (peek().kind == Tok::Amp) {
      ++pos_;
      f = make_and(f, until());
    }
    return f;
  }

  Formula until() {
    Formula f = unary();
    if (is_temporal_prefix("U")) {
      pos_ += 2;
      Bound b = bound();
      Formula rhs = unary();
      if (is_temporal_prefix("U")) throw ParseError(peek().pos, "chained U needs parentheses");
      return make_until(b, f, rhs);
    }
    return f;
  }

  Formula unary() {
    if (peek().kind == Tok::Bang) {
      ++pos_;
      return make_not(unary());
    }
    if (is_temporal_prefix("G") || is_temporal_prefix("F")) {
      const bool globally = peek().text == "G";
      pos_ += 2;
      Bound b = bound();
      Formula f = unary();
      return globally ? make_globally(b, f) : make_eventually(b, f);
    }
    if (is_temporal_prefix("X")) throw ParseError(peek().pos, "X<= is only allowed as a top-level reward query");
    return primary();
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        ++pos_;
        Formula f = implies();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident: {
        ++pos_;
        if (t.text == "true") return make_true();
        if (t.text == "false") return make_false();
        if (peek().kind == Tok::CmpOp) {
          const Cmp c = toks_[pos_++].cmp;
          return make_atom(t.text, c, constant());
        }
        return make_atom(t.text, Cmp::Ne, Decimal::integer(0));
      }
      case Tok::Number:
      case Tok::Char: {
        ++pos_;
        const Decimal value = t.number;
        const Token& op = expect(Tok::CmpOp, "comparison after constant");
        const Token& v = expect(Tok::Ident, "variable");
        return make_atom(v.text, flip(op.cmp), value);
      }
      case Tok::End:
        throw ParseError(t.pos, "unexpected end of formula");
      default:
        throw ParseError(t.pos, "unexpected '" + t.text + "'");
    }
  }

  Decimal constant() {
    const Token& t = peek();
    if (t.kind != Tok::Number && t.kind != Tok::Char) throw ParseError(t.pos, "expected constant");
    ++pos_;
    return t.number;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse(std::string_view text) { return Parser(text).query(); }

Formula parse_formula(std::string_view text) {
  Query q = parse(text);
  if (auto* f = std::get_if<Formula>(&q)) return *f;
  throw ParseError(0, "expected a formula, got a reward query");
}

}  // namespace scsmc::bltl
