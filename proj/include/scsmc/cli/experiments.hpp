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
#include <vector>

#include "scsmc/cli/config.hpp"

namespace scsmc::cli {

class UnknownExperiment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// table1, latency-curve, failure-first, eventual-failure, rewards,
/// reboots, functional-groups.
const std::vector<std::string>& experiment_names();

/// Column names between `experiment` and `value`.
std::vector<std::string> experiment_parameters(const std::string& name);

struct ExperimentOptions {
  /// Replaces the default sweep of the experiment's time parameter
  /// (T1 in ns for latency-curve, T in days for the ECS experiments).
  std::optional<std::vector<double>> grid;
};

/// Runs the sweep and writes the CSV (header included) to `csv`. Progress
/// notes go to `log` when given.
void run_experiment(const std::string& name, const Config& base, std::ostream& csv,
                    const ExperimentOptions& options = {}, std::ostream* log = nullptr);

}  // namespace scsmc::cli
