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
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scsmc/bltl/formula.hpp"
#include "scsmc/cli/config.hpp"
#include "scsmc/kernel/kernel.hpp"
#include "scsmc/models/ecs.hpp"
#include "scsmc/models/fifo.hpp"
#include "scsmc/monitor/monitor.hpp"

namespace scsmc::cli {

models::FifoConfig fifo_config(const Config& cfg);
models::EcsConfig ecs_config(const Config& cfg);

/// One simulation instance: kernel, model and sampling session.
struct TraceRun {
  std::unique_ptr<kernel::Kernel> kernel;
  std::unique_ptr<monitor::Observable> model;
  std::unique_ptr<monitor::Session> session;
};

/// Per-trace outcome of one query: a verdict for formulas, a value for
/// reward queries.
using Outcome = std::variant<bool, double>;

/// Builds identical simulation instances for a config; trace i draws from
/// random stream (seed, i).
class TraceFactory {
 public:
  /// `queries` are parsed from cfg.formulas unless given explicitly.
  explicit TraceFactory(const Config& cfg);
  TraceFactory(const Config& cfg, const std::vector<std::string>& query_texts);

  const std::vector<bltl::Query>& queries() const { return bound_; }
  const std::vector<std::string>& query_texts() const { return texts_; }
  const monitor::SchemaPtr& schema() const { return schema_; }
  const std::vector<monitor::ObservedVariable>& variables() const { return variables_; }
  kernel::SimTime time_unit() const { return time_unit_; }
  const kernel::Resolution& resolution() const { return resolution_; }

  TraceRun make(std::uint64_t index, kernel::SimTime until = kernel::SimTime::max()) const;

  /// Runs trace `index` until every query (or the subset `which`) is decided.
  std::vector<Outcome> sample(std::uint64_t index) const;
  Outcome sample_one(std::size_t query, std::uint64_t index) const;

  /// Default simulation horizon for trace dumps, in ticks.
  kernel::SimTime dump_horizon() const;

 private:
  std::vector<Outcome> run(std::uint64_t index, const std::vector<std::size_t>& which) const;

  Config cfg_;
  std::vector<std::string> texts_;
  std::vector<bltl::Query> bound_;
  std::vector<monitor::ObservedVariable> variables_;
  monitor::TemporalResolution resolution_events_;
  monitor::SchemaPtr schema_;
  kernel::Resolution resolution_;
  kernel::SimTime time_unit_;
};

/// Result of `check` for one query.
struct CheckResult {
  std::string query;
  std::string algorithm;
  /// Probability estimate or reward mean.
  std::optional<double> value;
  std::optional<std::string> decision;
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  int exit_code = 0;
  std::string machine_line() const;
};

std::vector<CheckResult> run_check(const Config& cfg);

/// Writes human-readable traces 0..count-1.
void emit_traces(const Config& cfg, std::uint64_t count, std::ostream& out);

/// Speaks the NEXT/STATE/END protocol for trace `index`.
void serve_trace(const Config& cfg, std::uint64_t index, std::istream& in, std::ostream& out);

/// Decides every configured query on a state stream read over the protocol.
/// The stream's variables must match the schema the config implies.
std::vector<Outcome> consume_trace(const Config& cfg, std::istream& in, std::ostream& out);

}  // namespace scsmc::cli
