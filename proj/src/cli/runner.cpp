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

#include "scsmc/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "scsmc/bltl/evaluator.hpp"
#include "scsmc/bltl/parser.hpp"
#include "scsmc/monitor/stdio_protocol.hpp"
#include "scsmc/smc/parallel.hpp"
#include "scsmc/smc/smc.hpp"
#include "scsmc/stochastic/rng.hpp"

namespace scsmc::cli {

namespace {

double param_double(const Config& cfg, const std::string& key, double fallback) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(0, "'" + key + "' expects a number, got '" + it->second + "'");
  }
}

int param_int(const Config& cfg, const std::string& key, int fallback) {
  const double v = param_double(cfg, key, fallback);
  if (v != std::floor(v) || v < 0 || v > 1e9) throw ConfigError(0, "'" + key + "' expects a non-negative integer");
  return static_cast<int>(v);
}

void reject_foreign_params(const Config& cfg, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : cfg.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(0, "parameter '" + key + "' does not apply to model '" + cfg.model + "'");
    }
  }
}

std::vector<std::string> default_variables(const std::string& model) {
  if (model == "fifo") return {"c_read", "c_write", "n_elements"};
  return {"sensor_groups", "actuator_groups", "main",      "proci",         "proco",
          "skipped",       "shutdown",        "class",     "reward_up",     "reward_danger",
          "reward_shutdown", "reboots_i",     "reboots_o"};
}

std::string default_resolution(const std::string& model) {
  return model == "fifo" ? "TIMED_NOTIFY_PHASE_END" : "EVENT:tick";
}

std::vector<std::string> query_variables(const bltl::Query& q) {
  if (const auto* f = std::get_if<bltl::Formula>(&q)) return bltl::variables(*f);
  return {std::get<bltl::RewardQuery>(q).variable};
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string format_scaled(std::int64_t raw, std::int64_t scale) {
  if (scale == 1) return std::to_string(raw);
  return format_value(static_cast<double>(raw) / static_cast<double>(scale));
}

std::unique_ptr<monitor::Observable> build_model(const Config& cfg, kernel::Kernel& k, std::uint64_t index) {
  stochastic::RngStream stream(cfg.seed, index);
  if (cfg.model == "fifo") return models::build_fifo(k, fifo_config(cfg), stream);
  return models::build_ecs(k, ecs_config(cfg), stream);
}

kernel::Resolution model_resolution(const Config& cfg) {
  return cfg.model == "fifo" ? kernel::Resolution{1, kernel::TimeUnit::NS} : kernel::Resolution{1, kernel::TimeUnit::MS};
}

// Evaluates a set of queries state by state.
class QueryBank {
 public:
  QueryBank(const std::vector<bltl::Query>& queries, const std::vector<std::size_t>& which) {
    for (std::size_t q : which) {
      if (const auto* f = std::get_if<bltl::Formula>(&queries[q])) {
        formulas_.emplace_back(*f);
        slots_.push_back({true, formulas_.size() - 1});
      } else {
        rewards_.emplace_back(std::get<bltl::RewardQuery>(queries[q]));
        slots_.push_back({false, rewards_.size() - 1});
      }
    }
    results_.resize(which.size());
    open_ = which.size();
  }

  bool done() const { return open_ == 0; }

  void push(const monitor::TimedState& s) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (results_[i]) continue;
      settle(i, slots_[i].formula ? to_outcome(formulas_[slots_[i].index].push(s))
                                  : to_outcome(rewards_[slots_[i].index].push(s)));
    }
  }

  void finish(bool complete) {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (results_[i]) continue;
      settle(i, slots_[i].formula ? to_outcome(formulas_[slots_[i].index].finish(complete))
                                  : to_outcome(rewards_[slots_[i].index].finish(complete)));
      if (!results_[i]) throw bltl::InsufficientTrace("reward query undecided at the end of the trace");
    }
  }

  std::vector<Outcome> results() const {
    std::vector<Outcome> out;
    for (const auto& r : results_) out.push_back(*r);
    return out;
  }

 private:
  struct Slot {
    bool formula;
    std::size_t index;
  };

  static std::optional<Outcome> to_outcome(bltl::Verdict v) {
    if (v == bltl::Verdict::Undecided) return std::nullopt;
    return Outcome{v == bltl::Verdict::True};
  }
  static std::optional<Outcome> to_outcome(std::optional<double> v) {
    if (!v) return std::nullopt;
    return Outcome{*v};
  }

  void settle(std::size_t i, std::optional<Outcome> o) {
    if (!o) return;
    results_[i] = o;
    --open_;
  }

  std::vector<bltl::OnlineEvaluator> formulas_;
  std::vector<bltl::RewardProbe> rewards_;
  std::vector<Slot> slots_;
  std::vector<std::optional<Outcome>> results_;
  std::size_t open_ = 0;
};

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

models::FifoConfig fifo_config(const Config& cfg) {
  reject_foreign_params(cfg, fifo_parameter_keys());
  models::FifoConfig f;
  f.p1 = param_double(cfg, "p1", f.p1);
  f.p2 = param_double(cfg, "p2", f.p2);
  f.capacity = static_cast<std::size_t>(param_int(cfg, "capacity", static_cast<int>(f.capacity)));
  if (auto it = cfg.params.find("message"); it != cfg.params.end()) f.message = it->second;
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return f;
}

models::EcsConfig ecs_config(const Config& cfg) {
  reject_foreign_params(cfg, ecs_parameter_keys());
  models::EcsConfig e;
  e.max_skipped = param_int(cfg, "K", e.max_skipped);
  e.mttf_sensor = param_double(cfg, "mttf_sensor", e.mttf_sensor);
  e.mttf_actuator = param_double(cfg, "mttf_actuator", e.mttf_actuator);
  e.mttf_processor = param_double(cfg, "mttf_processor", e.mttf_processor);
  e.mttf_transient = param_double(cfg, "mttf_transient", e.mttf_transient);
  if (cfg.params.contains("mttf_main")) e.mttf_main = param_double(cfg, "mttf_main", e.mttf_processor);
  e.reboot_time = param_double(cfg, "reboot_time", e.reboot_time);
  e.cycle = param_double(cfg, "cycle", e.cycle);
  e.tick = param_double(cfg, "tick", e.tick);
  e.sensor_groups = param_int(cfg, "sensor_groups", e.sensor_groups);
  e.actuator_groups = param_int(cfg, "actuator_groups", e.actuator_groups);
  e.sensor_group_threshold = param_int(cfg, "sensor_group_threshold", e.sensor_group_threshold);
  e.actuator_group_threshold = param_int(cfg, "actuator_group_threshold", e.actuator_group_threshold);
  if (auto it = cfg.params.find("exponential_reboot"); it != cfg.params.end()) {
    if (it->second != "true" && it->second != "false") throw ConfigError(0, "'exponential_reboot' expects true or false");
    e.exponential_reboot = it->second == "true";
  }
  try {
    if (auto it = cfg.params.find("classification"); it != cfg.params.end()) {
      e.classification = models::parse_classification(it->second);
    }
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(0, ex.what());
  }
  return e;
}

TraceFactory::TraceFactory(const Config& cfg) : TraceFactory(cfg, cfg.formulas) {}

TraceFactory::TraceFactory(const Config& cfg, const std::vector<std::string>& query_texts)
    : cfg_(cfg), texts_(query_texts), resolution_(model_resolution(cfg)) {
  std::vector<bltl::Query> parsed;
  for (const auto& t : texts_) parsed.push_back(bltl::parse(t));

  for (const auto& r : cfg_.time_resolution) resolution_events_.push_back(monitor::TemporalEvent::parse(r));
  if (resolution_events_.empty()) resolution_events_.push_back(monitor::TemporalEvent::parse(default_resolution(cfg_.model)));

  // A scratch instance resolves attribute paths and event names.
  kernel::Kernel scratch(kernel::KernelOptions{resolution_});
  auto model = build_model(cfg_, scratch, 0);
  time_unit_ = model->time_unit();

  for (const auto& a : cfg_.attributes) variables_.push_back(monitor::ObservedVariable::declare(a.path, a.alias));
  auto declared = [this](const std::string& name) {
    return std::any_of(variables_.begin(), variables_.end(), [&](const auto& v) { return v.name == name; });
  };
  std::vector<std::string> wanted;
  for (const auto& q : parsed) {
    for (auto& v : query_variables(q)) wanted.push_back(std::move(v));
  }
  for (const auto& ev : resolution_events_) {
    if (ev.kind == monitor::TemporalEvent::Kind::Predicate) {
      for (auto& v : bltl::variables(ev.predicate)) wanted.push_back(std::move(v));
    }
  }
  if (cfg_.attributes.empty() && wanted.empty()) wanted = default_variables(cfg_.model);
  for (const auto& name : wanted) {
    if (declared(name)) continue;
    if (!model->attribute(name)) {
      throw bltl::UnknownVariable("variable '" + name + "' is neither declared nor a '" + cfg_.model + "' attribute");
    }
    variables_.push_back(monitor::ObservedVariable::declare(name, name));
  }

  monitor::Session probe(scratch, *model, resolution_events_, variables_);
  schema_ = probe.schema();
  for (const auto& q : parsed) {
    if (const auto* f = std::get_if<bltl::Formula>(&q)) {
      bound_.emplace_back(bltl::bind(*f, *schema_, time_unit_.ticks()));
    } else {
      bound_.emplace_back(bltl::bind(std::get<bltl::RewardQuery>(q), *schema_, time_unit_.ticks()));
    }
  }
}

TraceRun TraceFactory::make(std::uint64_t index, kernel::SimTime until) const {
  TraceRun r;
  r.kernel = std::make_unique<kernel::Kernel>(kernel::KernelOptions{resolution_});
  r.model = build_model(cfg_, *r.kernel, index);
  r.session = std::make_unique<monitor::Session>(*r.kernel, *r.model, resolution_events_, variables_, until);
  return r;
}

std::vector<Outcome> TraceFactory::run(std::uint64_t index, const std::vector<std::size_t>& which) const {
  TraceRun r = make(index);
  QueryBank bank(bound_, which);
  while (!bank.done()) {
    auto s = r.session->next();
    if (!s) {
      bank.finish(r.session->complete());
      break;
    }
    bank.push(*s);
  }
  return bank.results();
}

std::vector<Outcome> TraceFactory::sample(std::uint64_t index) const { return run(index, all_indices(bound_.size())); }

Outcome TraceFactory::sample_one(std::size_t query, std::uint64_t index) const { return run(index, {query}).front(); }

kernel::SimTime TraceFactory::dump_horizon() const {
  double units = 100.0;
  if (cfg_.until) {
    units = *cfg_.until;
  } else {
    double longest = 0.0;
    bool any = false;
    for (const auto& q : bound_) {
      if (const auto* f = std::get_if<bltl::Formula>(&q)) {
        const auto h = bltl::horizon(*f);
        if (h.time_units > 0) {
          longest = std::max(longest, h.time_units);
          any = true;
        }
      } else {
        const auto& b = std::get<bltl::RewardQuery>(q).bound;
        if (b.kind == bltl::Bound::Kind::Time) {
          longest = std::max(longest, b.amount.to_double());
          any = true;
        }
      }
    }
    if (any) units = longest + 1.0;
  }
  const long double ticks = std::llround(static_cast<long double>(units) * time_unit_.ticks());
  return kernel::SimTime{static_cast<std::uint64_t>(ticks)};
}

std::string CheckResult::machine_line() const {
  std::ostringstream os;
  os << "RESULT algorithm=" << algorithm;
  if (value) os << " value=" << format_value(*value);
  if (decision) os << " decision=" << *decision;
  os << " n=" << n;
  if (algorithm != "mean") os << " successes=" << successes;
  os << " query=" << query;
  return os.str();
}

std::vector<CheckResult> run_check(const Config& cfg) {
  if (cfg.formulas.empty()) throw ConfigError(0, "no formula given");
  const TraceFactory factory(cfg);
  const auto& queries = factory.queries();
  std::vector<CheckResult> results(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    results[q].query = factory.query_texts()[q];
    results[q].algorithm = cfg.algorithm;
  }

  const auto is_reward = [&](std::size_t q) { return std::holds_alternative<bltl::RewardQuery>(queries[q]); };
  std::vector<std::size_t> shared;  // queries decided from one common set of traces
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (cfg.algorithm == "chernoff" || is_reward(q)) shared.push_back(q);
  }

  if (!shared.empty()) {
    const std::uint64_t n = cfg.samples ? cfg.samples : smc::chernoff_n(cfg.delta, cfg.alpha);
    const auto outcomes = smc::parallel_map<std::vector<Outcome>>(
        0, n, cfg.workers, [&](std::uint64_t i) { return factory.sample(i); });
    for (std::size_t q : shared) {
      auto& r = results[q];
      r.n = n;
      if (is_reward(q)) r.algorithm = "mean";
      double sum = 0.0;
      for (const auto& o : outcomes) {
        if (const auto* b = std::get_if<bool>(&o[q])) {
          r.successes += *b ? 1 : 0;
          sum += *b ? 1.0 : 0.0;
        } else {
          sum += std::get<double>(o[q]);
        }
      }
      r.value = sum / static_cast<double>(n);
    }
  }

  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (is_reward(q) || cfg.algorithm == "chernoff") continue;
    smc::TestParams params{cfg.theta, cfg.delta, cfg.alpha, cfg.beta};
    const smc::VerdictSampler sampler = [&](std::uint64_t i) { return std::get<bool>(factory.sample_one(q, i)); };
    smc::Verdict v;
    if (cfg.algorithm == "sprt") {
      v = smc::sprt(sampler, params, cfg.cap, cfg.workers);
    } else {
      v = smc::run_ssp(sampler, smc::single_sampling_plan(params), cfg.workers);
    }
    auto& r = results[q];
    r.n = v.samples_used;
    r.successes = v.successes;
    r.decision = std::string(smc::to_string(v.decision));
    r.exit_code = v.decision == smc::Decision::H0Accepted ? 0 : v.decision == smc::Decision::H1Accepted ? 1 : 2;
  }
  return results;
}

void emit_traces(const Config& cfg, std::uint64_t count, std::ostream& out) {
  if (count == 0) return;
  const TraceFactory factory(cfg);
  const kernel::SimTime until = factory.dump_horizon();
  const auto& schema = *factory.schema();
  for (std::uint64_t i = 0; i < count; ++i) {
    TraceRun r = factory.make(i, until);
    const monitor::Trace t = r.session->collect();
    out << "# trace " << i << " model " << cfg.model << " seed " << cfg.seed << " states " << t.size() << '\n';
    for (const auto& s : t.states) {
      out << "t=" << s.time.ticks() << ' ' << kernel::to_string(factory.resolution().unit);
      for (std::size_t v = 0; v < schema.size(); ++v) {
        out << ' ' << schema.name(v) << '=' << format_scaled(s.values[v], schema.scale(v));
      }
      out << '\n';
    }
  }
}

void serve_trace(const Config& cfg, std::uint64_t index, std::istream& in, std::ostream& out) {
  const TraceFactory factory(cfg);
  const kernel::SimTime until = cfg.until ? factory.dump_horizon() : kernel::SimTime::max();
  TraceRun r = factory.make(index, until);
  monitor::serve_stdio(*r.session, in, out);
}

std::vector<Outcome> consume_trace(const Config& cfg, std::istream& in, std::ostream& out) {
  const TraceFactory factory(cfg);
  monitor::StdioStateReader reader(in, out, factory.schema());
  QueryBank bank(factory.queries(), all_indices(factory.queries().size()));
  while (!bank.done()) {
    auto s = reader.next();
    if (!s) {
      bank.finish(reader.ended() && !cfg.until);
      break;
    }
    bank.push(*s);
  }
  return bank.results();
}

}  // namespace scsmc::cli
