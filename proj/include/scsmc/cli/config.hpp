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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scsmc::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& msg)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct AttributeDecl {
  std::string path;
  std::string alias;
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

/// Whitespace-separated key/value configuration. `#` starts a comment.
struct Config {
  std::string model = "fifo";
  std::vector<std::string> formulas;
  std::vector<std::string> time_resolution;
  std::vector<AttributeDecl> attributes;
  std::string algorithm = "chernoff";
  double delta = 0.02;
  double alpha = 0.02;
  double beta = 0.02;
  double theta = 0.5;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  /// Simulation horizon in model time units for trace dumps.
  std::optional<double> until;
  /// SPRT sample cap; 0 selects the default.
  std::uint64_t cap = 0;
  /// Fixed sample count overriding the Chernoff bound; 0 keeps the bound.
  std::uint64_t samples = 0;
  /// Model parameter overrides, by key.
  std::map<std::string, std::string> params;
  /// Keys that were accepted but have no effect.
  std::vector<std::string> warnings;

  friend bool operator==(const Config& a, const Config& b) {
    return a.model == b.model && a.formulas == b.formulas && a.time_resolution == b.time_resolution &&
           a.attributes == b.attributes && a.algorithm == b.algorithm && a.delta == b.delta && a.alpha == b.alpha &&
           a.beta == b.beta && a.theta == b.theta && a.seed == b.seed && a.workers == b.workers && a.until == b.until &&
           a.cap == b.cap && a.samples == b.samples && a.params == b.params;
  }
};

/// Model parameter keys accepted for each model.
const std::vector<std::string>& fifo_parameter_keys();
const std::vector<std::string>& ecs_parameter_keys();
bool is_model_parameter(std::string_view key);

Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Applies one `key value` setting; used by both the file parser and
/// command-line overrides.
void apply_setting(Config& cfg, std::string_view key, std::string_view value, std::size_t line = 0);

/// Serializes a config so that parse_config(serialize(c)) == c.
std::string serialize(const Config& cfg);

}  // namespace scsmc::cli
