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

#include "scsmc/monitor/trace.hpp"

#include <algorithm>

namespace scsmc::monitor {

Schema::Schema(std::vector<std::string> names, std::vector<std::int64_t> scales)
    : names_(std::move(names)), scales_(std::move(scales)) {
  if (names_.size() != scales_.size()) throw std::invalid_argument("schema names and scales differ in length");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (scales_[i] <= 0) throw std::invalid_argument("variable '" + names_[i] + "' has a non-positive scale");
    if (std::count(names_.begin(), names_.end(), names_[i]) > 1) {
      throw std::invalid_argument("duplicate variable '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

Trace project(const Trace& trace, const std::vector<std::string>& variables) {
  if (!trace.schema) throw ProjectionError("trace has no schema");
  std::vector<std::size_t> picks;
  std::vector<std::int64_t> scales;
  for (const auto& v : variables) {
    auto idx = trace.schema->index_of(v);
    if (!idx) throw ProjectionError("variable '" + v + "' is not part of the trace");
    picks.push_back(*idx);
    scales.push_back(trace.schema->scale(*idx));
  }
  Trace out;
  out.schema = std::make_shared<const Schema>(variables, std::move(scales));
  out.complete = trace.complete;
  out.states.reserve(trace.states.size());
  for (const auto& s : trace.states) {
    TimedState p;
    p.time = s.time;
    p.values.reserve(picks.size());
    for (std::size_t i : picks) p.values.push_back(s.values.at(i));
    out.states.push_back(std::move(p));
  }
  return out;
}

}  // namespace scsmc::monitor
