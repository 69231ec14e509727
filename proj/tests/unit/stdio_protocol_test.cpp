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

#include <gtest/gtest.h>

#include <sstream>

#include "scsmc/kernel/kernel.hpp"
#include "scsmc/models/fifo.hpp"
#include "scsmc/monitor/stdio_protocol.hpp"

namespace {

using namespace scsmc;
using monitor::ProtocolError;

TEST(StdioProtocol, FormatAndParseRoundTrip) {
  const monitor::Schema schema({"a", "b"}, {1, 1});
  const monitor::TimedState s{{-3, 42}, kernel::SimTime{17}};
  const std::string line = monitor::format_state(schema, s);
  EXPECT_EQ(line, "STATE t=17 a=-3;b=42");
  std::vector<std::string> names;
  EXPECT_EQ(monitor::parse_state_line(line + "\r", names), s);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(monitor::parse_state_line("STATE t=18 a=1;b=2", names).values, (std::vector<std::int64_t>{1, 2}));
}

TEST(StdioProtocol, MalformedLinesAreRejected) {
  std::vector<std::string> names;
  EXPECT_THROW(monitor::parse_state_line("STAT t=1 a=1", names), ProtocolError);
  EXPECT_THROW(monitor::parse_state_line("STATE t=x a=1", names), ProtocolError);
  EXPECT_THROW(monitor::parse_state_line("STATE t=1 a=1.5", names), ProtocolError);
  EXPECT_THROW(monitor::parse_state_line("STATE t=1 =1", names), ProtocolError);
  names = {"a"};
  EXPECT_THROW(monitor::parse_state_line("STATE t=1 b=1", names), ProtocolError);
}

TEST(StdioProtocol, ReaderHandlesEndAndClosedStream) {
  std::istringstream in("STATE t=0 a=1\nSTATE t=1 a=2\nEND\n");
  std::ostringstream out;
  const auto trace = monitor::read_stdio(in, out);
  EXPECT_EQ(trace.size(), 2u);
  EXPECT_TRUE(trace.complete);
  EXPECT_EQ(out.str(), "NEXT\nNEXT\nNEXT\n");

  std::istringstream truncated("STATE t=0 a=1\n");
  std::ostringstream out2;
  EXPECT_THROW(monitor::read_stdio(truncated, out2), ProtocolError);
}

TEST(StdioProtocol, ServerAnswersNextRequests) {
  kernel::Kernel k;
  models::FifoModel m(k, models::FifoConfig{}, stochastic::RngStream(5, 0));
  monitor::Session session(k, m, {monitor::TemporalEvent::parse("TIMED_NOTIFY_PHASE_END")},
                           {monitor::ObservedVariable::declare("c_read", "c_read"),
                            monitor::ObservedVariable::declare("n_elements", "n_elements")},
                           kernel::SimTime{3});
  std::istringstream in("NEXT\n\nNEXT\nNEXT\nNEXT\nNEXT\nNEXT\n");
  std::ostringstream out;
  monitor::serve_stdio(session, in, out);
  std::istringstream replies(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(replies, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0], "STATE t=0 c_read=-1;n_elements=0");
  EXPECT_TRUE(lines[3].starts_with("STATE t=3 "));
  EXPECT_EQ(lines[4], "END");
  EXPECT_EQ(lines[5], "END");

  std::istringstream bad("PLEASE\n");
  std::ostringstream sink;
  EXPECT_THROW(monitor::serve_stdio(session, bad, sink), ProtocolError);
}

TEST(StdioProtocol, LoopbackReproducesInProcessTrace) {
  auto make_trace = [](std::uint64_t seed) {
    kernel::Kernel k;
    models::FifoModel m(k, models::FifoConfig{}, stochastic::RngStream(seed, 0));
    monitor::Session s(k, m, {monitor::TemporalEvent::parse("TIMED_NOTIFY_PHASE_END")},
                       {monitor::ObservedVariable::declare("c_read", "c_read")}, kernel::SimTime{100});
    return s.collect();
  };
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto direct = make_trace(seed);
    std::ostringstream served;
    {
      kernel::Kernel k;
      models::FifoModel m(k, models::FifoConfig{}, stochastic::RngStream(seed, 0));
      monitor::Session s(k, m, {monitor::TemporalEvent::parse("TIMED_NOTIFY_PHASE_END")},
                         {monitor::ObservedVariable::declare("c_read", "c_read")}, kernel::SimTime{100});
      std::string requests;
      for (std::size_t i = 0; i <= direct.size(); ++i) requests += "NEXT\n";
      std::istringstream in(requests);
      monitor::serve_stdio(s, in, served);
    }
    std::istringstream replies(served.str());
    std::ostringstream ignored;
    auto read = monitor::read_stdio(replies, ignored, direct.schema);
    read.complete = direct.complete;
    EXPECT_EQ(read, direct);
  }
}

}  // namespace
