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

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "scsmc/monitor/monitor.hpp"
#include "scsmc/monitor/trace.hpp"

namespace scsmc::monitor {

// Line protocol between a trace producer and a checker. The checker sends
// `NEXT`; the producer answers with one of
//   STATE t=<ticks> <name>=<int>;<name>=<int>;...
//   END
// Variables appear in declared order with decimal integer values.

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_state(const Schema& schema, const TimedState& state);

/// Parses a STATE line. Fills `names` from the line when it is empty,
/// otherwise checks the line against it.
TimedState parse_state_line(std::string_view line, std::vector<std::string>& names);

/// Answers NEXT requests from `in` on `out` until `in` closes. Blank lines
/// are ignored; anything else is a protocol error.
void serve_stdio(Session& session, std::istream& in, std::ostream& out);

/// Checker side of the protocol.
class StdioStateReader {
 public:
  /// With `expected`, every STATE line must carry exactly its variables and
  /// schema() returns it (keeping its scales).
  StdioStateReader(std::istream& in, std::ostream& out, SchemaPtr expected = nullptr);

  /// Requests and returns the next state; nullopt after END.
  std::optional<TimedState> next();
  /// Schema learned from the first STATE line (all scales 1) unless one was
  /// supplied.
  SchemaPtr schema() const;
  bool ended() const { return ended_; }

 private:
  std::istream& in_;
  std::ostream& out_;
  SchemaPtr expected_;
  std::vector<std::string> names_;
  bool ended_ = false;
};

/// Reads the whole state stream into a trace.
Trace read_stdio(std::istream& in, std::ostream& out, SchemaPtr expected = nullptr,
                 std::size_t max_states = static_cast<std::size_t>(-1));

}  // namespace scsmc::monitor
