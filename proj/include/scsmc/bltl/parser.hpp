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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scsmc/bltl/formula.hpp"

namespace scsmc::bltl {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("at column " + std::to_string(position + 1) + ": " + message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses a formula or a top-level `X<=B var` reward query.
///
/// Concrete syntax:
///   G<=B f   F<=B f   f U<=B f   X<=B var
///   !f   f & f   f | f   f => f   ( f )   true   false
///   var OP const   const OP var   var      (OP: = == != < <= > >=)
/// A bound `#N` counts steps; a bare number is model time units. Constants
/// are integers, decimals, or quoted characters ('&' is 38). Precedence
/// from tightest: ! and temporal prefixes, U, &, |, => (right associative).
Query parse(std::string_view text);

/// Like parse() but rejects reward queries.
Formula parse_formula(std::string_view text);

}  // namespace scsmc::bltl
