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

#include "scsmc/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace scsmc::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Keys from the monitor generator's format that have no meaning here.
bool is_ignored_key(std::string_view key) {
  static const std::vector<std::string_view> keys = {"output_file", "mon_name", "usertype", "type",
                                                     "att_type",    "include",  "write_to_file"};
  return key.starts_with("plasma_") || std::find(keys.begin(), keys.end(), key) != keys.end();
}

double to_double(std::string_view text, std::string_view key, std::size_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_u64(std::string_view text, std::string_view key, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(line, "'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& fifo_parameter_keys() {
  static const std::vector<std::string> keys = {"p1", "p2", "capacity", "message"};
  return keys;
}

const std::vector<std::string>& ecs_parameter_keys() {
  static const std::vector<std::string> keys = {
      "K",           "mttf_sensor",    "mttf_actuator",      "mttf_processor",        "mttf_transient",
      "mttf_main",   "reboot_time", "exponential_reboot", "classification", "sensor_groups",         "actuator_groups",
      "sensor_group_threshold", "actuator_group_threshold", "cycle", "tick"};
  return keys;
}

bool is_model_parameter(std::string_view key) {
  const auto& f = fifo_parameter_keys();
  const auto& e = ecs_parameter_keys();
  return std::find(f.begin(), f.end(), key) != f.end() || std::find(e.begin(), e.end(), key) != e.end();
}

void apply_setting(Config& cfg, std::string_view key, std::string_view value, std::size_t line) {
  value = trim(value);
  if (value.empty()) throw ConfigError(line, "missing value for '" + std::string(key) + "'");
  if (key == "model") {
    if (value != "fifo" && value != "ecs") throw ConfigError(line, "unknown model '" + std::string(value) + "'");
    cfg.model = value;
  } else if (key == "formula") {
    cfg.formulas.emplace_back(value);
  } else if (key == "time_resolution") {
    cfg.time_resolution.emplace_back(value);
  } else if (key == "attribute") {
    const auto space = value.find_first_of(" \t");
    if (space == std::string_view::npos) throw ConfigError(line, "'attribute' expects '<path> <alias>'");
    const std::string_view alias = trim(value.substr(space + 1));
    if (alias.find_first_of(" \t") != std::string_view::npos) throw ConfigError(line, "'attribute' expects '<path> <alias>'");
    cfg.attributes.push_back({std::string(value.substr(0, space)), std::string(alias)});
  } else if (key == "algorithm") {
    if (value != "chernoff" && value != "sprt" && value != "ssp") {
      throw ConfigError(line, "unknown algorithm '" + std::string(value) + "' (chernoff, sprt, ssp)");
    }
    cfg.algorithm = value;
  } else if (key == "delta") {
    cfg.delta = to_double(value, key, line);
  } else if (key == "alpha") {
    cfg.alpha = to_double(value, key, line);
  } else if (key == "beta") {
    cfg.beta = to_double(value, key, line);
  } else if (key == "theta") {
    cfg.theta = to_double(value, key, line);
  } else if (key == "seed") {
    cfg.seed = to_u64(value, key, line);
  } else if (key == "workers") {
    const auto w = to_u64(value, key, line);
    if (w == 0 || w > 1024) throw ConfigError(line, "'workers' must lie in [1, 1024]");
    cfg.workers = static_cast<unsigned>(w);
  } else if (key == "until") {
    const double u = to_double(value, key, line);
    if (!(u >= 0)) throw ConfigError(line, "'until' must be non-negative");
    cfg.until = u;
  } else if (key == "cap") {
    cfg.cap = to_u64(value, key, line);
  } else if (key == "samples") {
    cfg.samples = to_u64(value, key, line);
  } else if (is_model_parameter(key)) {
    cfg.params[std::string(key)] = std::string(value);
  } else if (is_ignored_key(key)) {
    cfg.warnings.push_back("ignoring key '" + std::string(key) + "'");
  } else {
    throw ConfigError(line, "unknown key '" + std::string(key) + "'");
  }
}

Config parse_config(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find_first_of(" \t");
    const std::string_view key = line.substr(0, space);
    const std::string_view value = space == std::string_view::npos ? std::string_view{} : line.substr(space + 1);
    apply_setting(cfg, key, value, line_no);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const Config& cfg) {
  std::ostringstream os;
  os << "model " << cfg.model << '\n';
  for (const auto& a : cfg.attributes) os << "attribute " << a.path << ' ' << a.alias << '\n';
  for (const auto& r : cfg.time_resolution) os << "time_resolution " << r << '\n';
  for (const auto& f : cfg.formulas) os << "formula " << f << '\n';
  os << "algorithm " << cfg.algorithm << '\n';
  os << "delta " << format_double(cfg.delta) << '\n';
  os << "alpha " << format_double(cfg.alpha) << '\n';
  os << "beta " << format_double(cfg.beta) << '\n';
  os << "theta " << format_double(cfg.theta) << '\n';
  os << "seed " << cfg.seed << '\n';
  os << "workers " << cfg.workers << '\n';
  if (cfg.until) os << "until " << format_double(*cfg.until) << '\n';
  os << "cap " << cfg.cap << '\n';
  os << "samples " << cfg.samples << '\n';
  for (const auto& [k, v] : cfg.params) os << k << ' ' << v << '\n';
  return os.str();
}

}  // namespace scsmc::cli
