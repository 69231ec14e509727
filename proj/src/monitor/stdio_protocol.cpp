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

#include "scsmc/monitor/stdio_protocol.hpp"

#include <charconv>
#include <istream>
#include <ostream>

namespace scsmc::monitor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

template <typename T>
T parse_int(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ProtocolError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_state(const Schema& schema, const TimedState& state) {
  std::string line = "STATE t=" + std::to_string(state.time.ticks());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    line += i == 0 ? ' ' : ';';
    line += schema.name(i);
    line += '=';
    line += std::to_string(state.values.at(i));
  }
  return line;
}

TimedState parse_state_line(std::string_view line, std::vector<std::string>& names) {
  line = trim(line);
  if (!line.starts_with("STATE t=")) throw ProtocolError("expected STATE line, got '" + std::string(line) + "'");
  line.remove_prefix(8);
  const auto space = line.find(' ');
  TimedState state;
  state.time = kernel::SimTime{parse_int<std::uint64_t>(line.substr(0, space), "time tag")};
  std::vector<std::string> seen;
  if (space != std::string_view::npos) {
    std::string_view rest = line.substr(space + 1);
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const std::string_view item = rest.substr(0, semi);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw ProtocolError("malformed assignment '" + std::string(item) + "'");
      seen.emplace_back(item.substr(0, eq));
      state.values.push_back(parse_int<std::int64_t>(item.substr(eq + 1), "value"));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  if (names.empty()) {
    names = std::move(seen);
  } else if (seen != names) {
    throw ProtocolError("STATE line variables differ from the declared order");
  }
  return state;
}

void serve_stdio(Session& session, std::istream& in, std::ostream& out) {
  std::string line;
  bool ended = false;
  while (std::getline(in, line)) {
    const std::string_view cmd = trim(line);
    if (cmd.empty()) continue;
    if (cmd != "NEXT") throw ProtocolError("unexpected request '" + std::string(cmd) + "'");
    std::optional<TimedState> s;
    if (!ended) s = session.next();
    if (s) {
      out << format_state(*session.schema(), *s) << '\n';
    } else {
      ended = true;
      out << "END\n";
    }
    out.flush();
  }
}

StdioStateReader::StdioStateReader(std::istream& in, std::ostream& out, SchemaPtr expected)
    : in_(in), out_(out), expected_(std::move(expected)) {
  if (expected_) names_ = expected_->names();
}

std::optional<TimedState> StdioStateReader::next() {
  if (ended_) return std::nullopt;
  out_ << "NEXT\n";
  out_.flush();
  std::string line;
  if (!std::getline(in_, line)) throw ProtocolError("producer closed the stream without END");
  const std::string_view reply = trim(line);
  if (reply == "END") {
    ended_ = true;
    return std::nullopt;
  }
  const bool had_names = !names_.empty();
  TimedState s = parse_state_line(reply, names_);
  if (!had_names && !names_.empty() && expected_) throw ProtocolError("unexpected variables in STATE line");
  return s;
}

SchemaPtr StdioStateReader::schema() const {
  if (expected_) return expected_;
  return std::make_shared<const Schema>(names_, std::vector<std::int64_t>(names_.size(), 1));
}

Trace read_stdio(std::istream& in, std::ostream& out, SchemaPtr expected, std::size_t max_states) {
  StdioStateReader reader(in, out, std::move(expected));
  Trace t;
  while (t.states.size() < max_states) {
    auto s = reader.next();
    if (!s) break;
    t.states.push_back(std::move(*s));
  }
  t.schema = reader.schema();
  t.complete = reader.ended();
  return t;
}

}  // namespace scsmc::monitor
