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

#include "scsmc/cli/experiments.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "scsmc/cli/runner.hpp"
#include "scsmc/smc/parallel.hpp"
#include "scsmc/smc/smc.hpp"

namespace scsmc::cli {

namespace {

constexpr double kUnitsPerDay = 2880.0;  // 30 s time units

struct Point {
  std::vector<std::string> params;
  std::string query;
  double scale = 1.0;  // the reported value is outcome / scale
};

struct Group {
  Config cfg;
  std::vector<Point> points;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string days_to_units(double days) { return num(days * kUnitsPerDay); }

std::vector<double> default_grid(const std::string& name) {
  if (name == "latency-curve") {
    std::vector<double> g;
    for (int t = 12; t <= 25; ++t) g.push_back(t);
    return g;
  }
  return {1, 2, 5, 10, 15, 20, 25, 30};
}

std::vector<Group> build_groups(const std::string& name, const Config& base, const std::vector<double>& grid) {
  std::vector<Group> groups;
  if (name == "table1") {
    for (double p1 : {0.6, 0.9}) {
      for (double p2 : {0.3, 0.6, 0.9}) {
        Group g{base, {}};
        g.cfg.model = "fifo";
        g.cfg.params["p1"] = num(p1);
        g.cfg.params["p2"] = num(p2);
        g.points.push_back({{num(p1), num(p2)}, "G<=5000((c_read = '&') => (F<=25 (c_read = '@')))"});
        groups.push_back(std::move(g));
      }
    }
  } else if (name == "latency-curve") {
    Group g{base, {}};
    g.cfg.model = "fifo";
    g.cfg.params["p1"] = "0.9";
    g.cfg.params["p2"] = "0.9";
    for (double t1 : grid) {
      g.points.push_back({{"10000", num(t1)}, "G<=10000((c_read = '&') => (F<=" + num(t1) + " (c_read = '@')))"});
    }
    groups.push_back(std::move(g));
  } else if (name == "failure-first" || name == "eventual-failure") {
    Group g{base, {}};
    g.cfg.model = "ecs";
    for (double days : grid) {
      for (int i = 1; i <= 4; ++i) {
        const std::string f = "failure_" + std::to_string(i);
        const std::string q = name == "failure-first" ? "(!shutdown) U<=" + days_to_units(days) + " " + f
                                                      : "F<=" + days_to_units(days) + " " + f;
        g.points.push_back({{f, num(days)}, q});
      }
    }
    groups.push_back(std::move(g));
  } else if (name == "rewards" || name == "reboots" || name == "functional-groups") {
    Group g{base, {}};
    g.cfg.model = "ecs";
    std::vector<std::string> vars;
    double scale = 1.0;
    if (name == "rewards") {
      vars = {"reward_up", "reward_danger", "reward_shutdown"};
      scale = kUnitsPerDay;
    } else if (name == "reboots") {
      vars = {"reboots_i", "reboots_o", "reboots"};
    } else {
      vars = {"sensor_groups", "actuator_groups"};
    }
    for (double days : grid) {
      for (const auto& v : vars) g.points.push_back({{v, num(days)}, "X<=" + days_to_units(days) + " " + v, scale});
    }
    groups.push_back(std::move(g));
  } else {
    throw UnknownExperiment("unknown experiment '" + name + "'");
  }
  return groups;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"table1",  "latency-curve", "failure-first",    "eventual-failure",
                                                 "rewards", "reboots",       "functional-groups"};
  return names;
}

std::vector<std::string> experiment_parameters(const std::string& name) {
  if (name == "table1") return {"p1", "p2"};
  if (name == "latency-curve") return {"T", "T1"};
  if (name == "failure-first" || name == "eventual-failure") return {"failure", "T_days"};
  if (name == "rewards") return {"class", "T_days"};
  if (name == "reboots") return {"processor", "T_days"};
  if (name == "functional-groups") return {"group", "T_days"};
  throw UnknownExperiment("unknown experiment '" + name + "'");
}

void run_experiment(const std::string& name, const Config& base, std::ostream& csv, const ExperimentOptions& options,
                    std::ostream* log) {
  const auto columns = experiment_parameters(name);
  const auto grid = options.grid ? *options.grid : default_grid(name);
  const auto groups = build_groups(name, base, grid);

  csv << "experiment";
  for (const auto& c : columns) csv << ',' << c;
  csv << ",value,n,delta,alpha,seed,seconds\n";

  const std::uint64_t n = base.samples ? base.samples : smc::chernoff_n(base.delta, base.alpha);
  // Half-width that n samples guarantee at the configured alpha.
  const double delta = std::sqrt(std::log(2.0 / base.alpha) / (2.0 * static_cast<double>(n)));

  for (const auto& g : groups) {
    std::vector<std::string> queries;
    for (const auto& p : g.points) queries.push_back(p.query);
    const auto start = std::chrono::steady_clock::now();
    const TraceFactory factory(g.cfg, queries);
    const auto outcomes = smc::parallel_map<std::vector<Outcome>>(
        0, n, base.workers, [&](std::uint64_t i) { return factory.sample(i); });
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / static_cast<double>(g.points.size());

    for (std::size_t q = 0; q < g.points.size(); ++q) {
      double sum = 0.0;
      for (const auto& o : outcomes) {
        if (const auto* b = std::get_if<bool>(&o[q])) {
          sum += *b ? 1.0 : 0.0;
        } else {
          sum += std::get<double>(o[q]);
        }
      }
      const double value = sum / static_cast<double>(n) / g.points[q].scale;
      csv << name;
      for (const auto& p : g.points[q].params) csv << ',' << p;
      csv << ',' << num(value) << ',' << n << ',' << num(delta) << ',' << num(base.alpha) << ',' << base.seed << ','
          << std::fixed << std::setprecision(3) << seconds << std::defaultfloat << '\n';
      if (log) *log << name << ": " << g.points[q].query << " -> " << num(value) << '\n';
    }
    csv.flush();
  }
}

}  // namespace scsmc::cli
