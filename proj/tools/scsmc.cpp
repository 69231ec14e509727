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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scsmc/bltl/evaluator.hpp"
#include "scsmc/bltl/parser.hpp"
#include "scsmc/cli/config.hpp"
#include "scsmc/cli/experiments.hpp"
#include "scsmc/cli/runner.hpp"
#include "scsmc/monitor/monitor.hpp"
#include "scsmc/monitor/stdio_protocol.hpp"
#include "scsmc/smc/parallel.hpp"
#include "scsmc/smc/smc.hpp"

namespace {

using scsmc::cli::Config;

constexpr int kExitConfigError = 3;
constexpr int kExitRuntimeError = 4;

// Options shared by every subcommand; flags override the config file.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> formulas;
  std::vector<std::string> resolutions;
  std::vector<std::string> attributes;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> scalars;
  std::string model, algorithm, delta, alpha, beta, theta, seed, workers, until, cap, samples;

  void attach(CLI::App* app) {
    app->add_option("config", config_path, "configuration file");
    app->add_option("--model", model, "fifo or ecs");
    app->add_option("--formula,-f", formulas, "BLTL formula or reward query (repeatable)");
    app->add_option("--time-resolution", resolutions, "temporal event (repeatable)");
    app->add_option("--attribute", attributes, "'<path> <alias>' declaration (repeatable)");
    app->add_option("--algorithm", algorithm, "chernoff, sprt or ssp");
    app->add_option("--delta", delta);
    app->add_option("--alpha", alpha);
    app->add_option("--beta", beta);
    app->add_option("--theta", theta);
    app->add_option("--seed", seed, "master seed");
    app->add_option("--workers", workers, "parallel trace workers");
    app->add_option("--until", until, "simulation horizon in model time units");
    app->add_option("--cap", cap, "SPRT sample cap");
    app->add_option("--samples", samples, "fixed sample count (overrides the Chernoff bound)");
    app->add_option("--set", sets, "model parameter override key=value (repeatable)");
  }

  Config load() const {
    Config cfg = config_path.empty() ? Config{} : scsmc::cli::load_config(config_path);
    const auto put = [&cfg](const char* key, const std::string& value) {
      if (!value.empty()) scsmc::cli::apply_setting(cfg, key, value);
    };
    put("model", model);
    put("algorithm", algorithm);
    put("delta", delta);
    put("alpha", alpha);
    put("beta", beta);
    put("theta", theta);
    put("seed", seed);
    put("workers", workers);
    put("until", until);
    put("cap", cap);
    put("samples", samples);
    if (!formulas.empty()) cfg.formulas.clear();
    for (const auto& f : formulas) put("formula", f);
    if (!resolutions.empty()) cfg.time_resolution.clear();
    for (const auto& r : resolutions) put("time_resolution", r);
    if (!attributes.empty()) cfg.attributes.clear();
    for (const auto& a : attributes) put("attribute", a);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw scsmc::cli::ConfigError(0, "--set expects key=value, got '" + s + "'");
      const std::string key = s.substr(0, eq);
      if (!scsmc::cli::is_model_parameter(key)) throw scsmc::cli::ConfigError(0, "unknown model parameter '" + key + "'");
      put(key.c_str(), s.substr(eq + 1));
    }
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    return cfg;
  }
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw scsmc::cli::ConfigError(0, "malformed grid value '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw scsmc::cli::ConfigError(0, "empty grid");
  return grid;
}

int cmd_check(const CommonOptions& opts) {
  const Config cfg = opts.load();
  const auto results = scsmc::cli::run_check(cfg);
  int code = 0;
  for (const auto& r : results) {
    std::cout << r.machine_line() << '\n';
    code = std::max(code, r.exit_code);
  }
  for (const auto& r : results) {
    std::cout << "# " << r.query << ": ";
    if (r.decision) {
      std::cout << *r.decision << " after " << r.n << " traces (" << r.successes << " satisfied)";
    } else if (r.algorithm == "mean") {
      std::cout << "mean " << *r.value << " over " << r.n << " traces";
    } else {
      std::cout << "probability " << *r.value << " (" << r.successes << "/" << r.n << " traces, delta " << cfg.delta
                << ", alpha " << cfg.alpha << ")";
    }
    std::cout << '\n';
  }
  return code;
}

int cmd_experiment(const CommonOptions& opts, const std::string& name, const std::string& output,
                   const std::string& grid) {
  const Config cfg = opts.load();
  scsmc::cli::ExperimentOptions eo;
  if (!grid.empty()) eo.grid = parse_grid(grid);
  if (output.empty() || output == "-") {
    scsmc::cli::run_experiment(name, cfg, std::cout, eo, &std::cerr);
  } else {
    std::ofstream out(output);
    if (!out) throw scsmc::cli::ConfigError(0, "cannot write '" + output + "'");
    scsmc::cli::run_experiment(name, cfg, out, eo, &std::cerr);
  }
  return 0;
}

int cmd_trace(const CommonOptions& opts, bool emit, bool serve, std::uint64_t count, std::uint64_t index,
              const std::string& output) {
  const Config cfg = opts.load();
  if (emit == serve) throw scsmc::cli::ConfigError(0, "trace needs exactly one of --emit or --serve");
  if (serve) {
    scsmc::cli::serve_trace(cfg, index, std::cin, std::cout);
    return 0;
  }
  if (output.empty() || output == "-") {
    scsmc::cli::emit_traces(cfg, count, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) throw scsmc::cli::ConfigError(0, "cannot write '" + output + "'");
    scsmc::cli::emit_traces(cfg, count, out);
  }
  return 0;
}

int cmd_consume(const CommonOptions& opts) {
  const Config cfg = opts.load();
  const auto outcomes = scsmc::cli::consume_trace(cfg, std::cin, std::cout);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    std::cerr << "VERDICT query=" << cfg.formulas.at(i) << " value=";
    if (const auto* b = std::get_if<bool>(&outcomes[i])) {
      std::cerr << (*b ? "true" : "false");
    } else {
      std::cerr << std::get<double>(outcomes[i]);
    }
    std::cerr << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical model checker for discrete-event stochastic models"};
  app.require_subcommand(1);

  CommonOptions check_opts;
  auto* check = app.add_subcommand("check", "decide or estimate the configured formulas");
  check_opts.attach(check);

  CommonOptions exp_opts;
  std::string exp_name, exp_output, exp_grid;
  auto* experiment = app.add_subcommand("experiment", "run a named parameter sweep and write CSV");
  experiment->add_option("name", exp_name, "experiment name")->required();
  exp_opts.attach(experiment);
  experiment->add_option("--output,-o", exp_output, "CSV file (default: standard output)");
  experiment->add_option("--grid", exp_grid, "comma-separated sweep of the time parameter");

  CommonOptions trace_opts;
  bool emit = false;
  bool serve = false;
  std::uint64_t count = 1;
  std::uint64_t index = 0;
  std::string trace_output;
  auto* trace = app.add_subcommand("trace", "dump sampled traces or serve one over standard input/output");
  trace_opts.attach(trace);
  trace->add_flag("--emit", emit, "write human-readable traces");
  trace->add_flag("--serve", serve, "answer NEXT requests on standard input");
  trace->add_option("--count", count, "number of traces to emit");
  trace->add_option("--index", index, "trace index to serve");
  trace->add_option("--output,-o", trace_output, "trace file (default: standard output)");

  CommonOptions consume_opts;
  auto* consume = app.add_subcommand("consume", "decide the formulas on a trace read over standard input/output");
  consume_opts.attach(consume);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (*check) return cmd_check(check_opts);
    if (*experiment) return cmd_experiment(exp_opts, exp_name, exp_output, exp_grid);
    if (*trace) return cmd_trace(trace_opts, emit, serve, count, index, trace_output);
    if (*consume) return cmd_consume(consume_opts);
  } catch (const scsmc::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const scsmc::bltl::ParseError& e) {
    std::cerr << "formula error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const scsmc::bltl::UnknownVariable& e) {
    std::cerr << "formula error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const scsmc::monitor::MonitorError& e) {
    std::cerr << "monitor error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const scsmc::cli::UnknownExperiment& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const scsmc::smc::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitRuntimeError;
}
