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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scsmc/kernel/sim_time.hpp"

namespace scsmc::monitor {

/// Names and fixed-point scales of the variables carried by a trace, in
/// declared order. A variable's numeric value is raw / scale.
class Schema {
 public:
  Schema() = default;
  Schema(std::vector<std::string> names, std::vector<std::int64_t> scales);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::int64_t scale(std::size_t i) const { return scales_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::int64_t> scales_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

/// Valuation of the observed variables at one temporal-event occurrence.
struct TimedState {
  std::vector<std::int64_t> values;
  kernel::SimTime time{};

  friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// Finite execution trace. `complete` marks a trace whose simulation ended,
/// so no state can follow the last one.
struct Trace {
  SchemaPtr schema;
  std::vector<TimedState> states;
  bool complete = false;

  std::size_t size() const { return states.size(); }
  friend bool operator==(const Trace& a, const Trace& b) {
    const bool same_schema = a.schema == b.schema || (a.schema && b.schema && *a.schema == *b.schema);
    return same_schema && a.states == b.states && a.complete == b.complete;
  }
};

class ProjectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Restricts every state of `trace` to `variables`, keeping length and time
/// tags. Throws ProjectionError if a name is not in the trace's schema.
Trace project(const Trace& trace, const std::vector<std::string>& variables);

}  // namespace scsmc::monitor
