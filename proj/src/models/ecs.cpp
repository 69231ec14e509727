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

#include "scsmc/models/ecs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scsmc::models {

namespace {

kernel::SimTime saturating_add(kernel::SimTime a, kernel::SimTime b) {
  if (a.ticks() > std::numeric_limits<std::uint64_t>::max() - b.ticks()) return kernel::SimTime::max();
  return kernel::SimTime{a.ticks() + b.ticks()};
}

}  // namespace

std::string_view to_string(Classification c) {
  return c == Classification::ProcessorsOnly ? "processors-only" : "any-degradation";
}

Classification parse_classification(std::string_view text) {
  if (text == "processors-only") return Classification::ProcessorsOnly;
  if (text == "any-degradation") return Classification::AnyDegradation;
  throw std::invalid_argument("unknown classification '" + std::string(text) + "'");
}

std::string_view to_string(StateClass c) {
  switch (c) {
    case StateClass::Up: return "up";
    case StateClass::Danger: return "danger";
    case StateClass::Shutdown: return "shutdown";
  }
  return "?";
}

void EcsConfig::validate() const {
  if (sensor_groups < 1 || actuator_groups < 1) throw std::invalid_argument("group counts must be positive");
  if (sensors_per_group < 1 || actuators_per_group < 1) throw std::invalid_argument("group sizes must be positive");
  if (sensors_needed_per_group < 1 || sensors_needed_per_group > sensors_per_group ||
      actuators_needed_per_group < 1 || actuators_needed_per_group > actuators_per_group) {
    throw std::invalid_argument("per-group functional rules must lie within the group size");
  }
  if (sensor_group_threshold < 1 || sensor_group_threshold > sensor_groups ||
      actuator_group_threshold < 1 || actuator_group_threshold > actuator_groups) {
    throw std::invalid_argument("group thresholds must be positive and at most the group counts");
  }
  if (max_skipped < 0) throw std::invalid_argument("K must be non-negative");
  if (!(cycle > 0) || !(tick > 0) || !(reboot_time > 0)) throw std::invalid_argument("cycle, tick and reboot time must be positive");
  if (ticks_per_unit == 0) throw std::invalid_argument("ticks per unit must be positive");
  for (double m : {mttf_sensor, mttf_actuator, mttf_processor, mttf_transient, main_mttf()}) {
    if (!(m >= 0) || std::isinf(m)) throw std::invalid_argument("mean times to failure must be finite and non-negative");
  }
}

int EcsState::functional_sensor_groups(const EcsConfig& cfg) const {
  return static_cast<int>(std::count_if(sensors.begin(), sensors.end(), [&](int s) { return s >= cfg.sensors_needed_per_group; }));
}

int EcsState::functional_actuator_groups(const EcsConfig& cfg) const {
  return static_cast<int>(
      std::count_if(actuators.begin(), actuators.end(), [&](int a) { return a >= cfg.actuators_needed_per_group; }));
}

FailureFlags failure_predicates(const EcsState& s, const EcsConfig& cfg) {
  FailureFlags f;
  f.failure_1 = s.functional_sensor_groups(cfg) < cfg.sensor_group_threshold && s.proci == 2;
  f.failure_2 = s.functional_actuator_groups(cfg) < cfg.actuator_group_threshold && s.proco == 2;
  f.failure_3 = s.skipped > cfg.max_skipped;
  f.failure_4 = s.main == 0;
  return f;
}

StateClass class_of(const EcsState& s, const EcsConfig& cfg) {
  if (s.halted || failure_predicates(s, cfg).shutdown()) return StateClass::Shutdown;
  bool up = s.proci == 2 && s.proco == 2 && s.main == 1;
  if (up && cfg.classification == Classification::AnyDegradation) {
    up = std::all_of(s.sensors.begin(), s.sensors.end(), [&](int n) { return n == cfg.sensors_per_group; }) &&
         std::all_of(s.actuators.begin(), s.actuators.end(), [&](int n) { return n == cfg.actuators_per_group; });
  }
  return up ? StateClass::Up : StateClass::Danger;
}

EcsModel::EcsModel(kernel::Kernel& kernel, EcsConfig config, stochastic::RngStream stream)
    : kernel_(kernel), config_(std::move(config)), rng_(stream) {
  config_.validate();
  state_.sensors.assign(static_cast<std::size_t>(config_.sensor_groups), config_.sensors_per_group);
  state_.actuators.assign(static_cast<std::size_t>(config_.actuator_groups), config_.actuators_per_group);
  current_class_ = class_of(state_, config_);

  tick_ = kernel_.create_event("tick");
  cycle_ = kernel_.create_event("cycle");
  shutdown_ = kernel_.create_event("shutdown_event");
  transition_ = kernel_.create_event("transition");

  // Timers are drawn in a fixed order: sensors, actuators, main, I/O.
  if (config_.mttf_sensor > 0) {
    for (int& s : state_.sensors) {
      for (int k = 0; k < config_.sensors_per_group; ++k) kernel_.spawn_thread("sensor", component(&s, config_.mttf_sensor));
    }
  }
  if (config_.mttf_actuator > 0) {
    for (int& a : state_.actuators) {
      for (int k = 0; k < config_.actuators_per_group; ++k) kernel_.spawn_thread("actuator", component(&a, config_.mttf_actuator));
    }
  }
  if (config_.main_mttf() > 0) kernel_.spawn_thread("main", main_processor());
  kernel_.spawn_thread("proci", io_processor(&state_.proci, &reboots_i_, "proci"));
  kernel_.spawn_thread("proco", io_processor(&state_.proco, &reboots_o_, "proco"));
  kernel_.spawn_thread("cycle", cycle());
  kernel_.spawn_thread("ticker", ticker());
}

kernel::SimTime EcsModel::units(double u) const {
  const long double ticks = std::ceil(static_cast<long double>(u) * config_.ticks_per_unit);
  return kernel::SimTime{std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ticks))};
}

kernel::SimTime EcsModel::exp_delay(double mean_units) {
  return stochastic::exp_delay(rng_, 1.0 / mean_units, time_unit());
}

void EcsModel::before_transition() {
  const kernel::SimTime now = kernel_.now();
  reward_[static_cast<std::size_t>(current_class_)] += (now - accounted_).ticks();
  accounted_ = now;
}

void EcsModel::after_transition() {
  if (!state_.halted && failure_predicates(state_, config_).shutdown()) {
    state_.halted = true;
    kernel_.notify_delta(shutdown_);
  }
  current_class_ = class_of(state_, config_);
  kernel_.notify_delta(transition_);
}

std::uint64_t EcsModel::reward_ticks(StateClass c) const {
  std::uint64_t r = reward_[static_cast<std::size_t>(c)];
  if (c == current_class_) r += (kernel_.now() - accounted_).ticks();
  return r;
}

void EcsModel::inject_proci_failure() {
  before_transition();
  state_.proci = 0;
  after_transition();
}

kernel::Process EcsModel::component(int* slot, double mttf) {
  const bool timed_out = co_await kernel_.wait(exp_delay(mttf), shutdown_);
  if (!timed_out || state_.halted) co_return;
  before_transition();
  --*slot;
  after_transition();
}

kernel::Process EcsModel::main_processor() {
  const bool timed_out = co_await kernel_.wait(exp_delay(config_.main_mttf()), shutdown_);
  if (!timed_out || state_.halted) co_return;
  before_transition();
  state_.main = 0;
  after_transition();
}

kernel::Process EcsModel::io_processor(int* proc, std::uint64_t* reboots, const char* name) {
  if (*proc == 0 || state_.halted) co_return;
  const kernel::SimTime never = kernel::SimTime::max();
  const kernel::SimTime permanent_at =
      config_.mttf_processor > 0 ? saturating_add(kernel_.now(), exp_delay(config_.mttf_processor)) : never;

  for (;;) {
    const kernel::SimTime transient_at =
        config_.mttf_transient > 0 ? saturating_add(kernel_.now(), exp_delay(config_.mttf_transient)) : never;
    const bool permanent = permanent_at <= transient_at;
    const kernel::SimTime fault_at = permanent ? permanent_at : transient_at;
    if (fault_at == never) {
      co_await kernel_.wait(shutdown_);
      co_return;
    }
    if (!co_await kernel_.wait(fault_at - kernel_.now(), shutdown_) || state_.halted) co_return;

    before_transition();
    *proc = permanent ? 0 : 1;
    probes_.hit(std::string(name) + (permanent ? ".permanent_fault" : ".transient_fault"));
    after_transition();
    if (permanent || state_.halted) co_return;

    const kernel::SimTime reboot =
        config_.exponential_reboot ? exp_delay(config_.reboot_time) : units(config_.reboot_time);
    const kernel::SimTime reboot_at = saturating_add(kernel_.now(), reboot);
    const bool fails_while_rebooting = permanent_at <= reboot_at;
    const kernel::SimTime until = fails_while_rebooting ? permanent_at : reboot_at;
    if (!co_await kernel_.wait(until - kernel_.now(), shutdown_) || state_.halted) co_return;

    before_transition();
    if (fails_while_rebooting) {
      *proc = 0;
      after_transition();
      co_return;
    }
    *proc = 2;
    ++*reboots;
    probes_.hit(std::string(name) + ".reboot");
    after_transition();
  }
}

kernel::Process EcsModel::cycle() {
  const kernel::SimTime period = units(config_.cycle);
  for (;;) {
    if (!co_await kernel_.wait(period, shutdown_) || state_.halted) co_return;
    before_transition();
    if (state_.proci == 2 && state_.proco == 2 && state_.main == 1) {
      state_.skipped = 0;
    } else {
      ++state_.skipped;
    }
    after_transition();
    kernel_.notify(cycle_);
  }
}

kernel::Process EcsModel::ticker() {
  const kernel::SimTime period = units(config_.tick);
  for (;;) {
    kernel_.notify(tick_);
    co_await kernel_.wait(period);
  }
}

std::optional<monitor::Attribute> EcsModel::attribute(std::string_view path) const {
  using monitor::Attribute;
  const auto scale = static_cast<std::int64_t>(config_.ticks_per_unit);
  const auto flag = [this](bool FailureFlags::*member) {
    return Attribute{[this, member] { return std::int64_t{failures().*member}; }};
  };
  const auto reward = [this, scale](StateClass c) {
    return Attribute{[this, c] { return static_cast<std::int64_t>(reward_ticks(c)); }, scale};
  };
  if (path == "sensor_groups") return Attribute{[this] { return std::int64_t{state_.functional_sensor_groups(config_)}; }};
  if (path == "actuator_groups") {
    return Attribute{[this] { return std::int64_t{state_.functional_actuator_groups(config_)}; }};
  }
  if (path == "main") return Attribute{[this] { return std::int64_t{state_.main}; }};
  if (path == "proci") return Attribute{[this] { return std::int64_t{state_.proci}; }};
  if (path == "proco") return Attribute{[this] { return std::int64_t{state_.proco}; }};
  if (path == "skipped") return Attribute{[this] { return std::int64_t{state_.skipped}; }};
  if (path == "failure_1") return flag(&FailureFlags::failure_1);
  if (path == "failure_2") return flag(&FailureFlags::failure_2);
  if (path == "failure_3") return flag(&FailureFlags::failure_3);
  if (path == "failure_4") return flag(&FailureFlags::failure_4);
  if (path == "shutdown") return Attribute{[this] { return std::int64_t{state_class() == StateClass::Shutdown}; }};
  if (path == "up") return Attribute{[this] { return std::int64_t{state_class() == StateClass::Up}; }};
  if (path == "danger") return Attribute{[this] { return std::int64_t{state_class() == StateClass::Danger}; }};
  if (path == "class") return Attribute{[this] { return static_cast<std::int64_t>(state_class()); }};
  if (path == "reboots_i") return Attribute{[this] { return static_cast<std::int64_t>(reboots_i_); }};
  if (path == "reboots_o") return Attribute{[this] { return static_cast<std::int64_t>(reboots_o_); }};
  if (path == "reboots") return Attribute{[this] { return static_cast<std::int64_t>(reboots_i_ + reboots_o_); }};
  if (path == "reward_up") return reward(StateClass::Up);
  if (path == "reward_danger") return reward(StateClass::Danger);
  if (path == "reward_shutdown") return reward(StateClass::Shutdown);
  if (path == "elapsed") return Attribute{[this] { return static_cast<std::int64_t>(kernel_.now().ticks()); }, scale};
  return std::nullopt;
}

std::vector<std::string> EcsModel::attribute_paths() const {
  return {"sensor_groups", "actuator_groups", "main",      "proci",     "proco",         "skipped",
          "failure_1",     "failure_2",       "failure_3", "failure_4", "shutdown",      "up",
          "danger",        "class",           "reboots_i", "reboots_o", "reboots",       "reward_up",
          "reward_danger", "reward_shutdown", "elapsed"};
}

std::unique_ptr<EcsModel> build_ecs(kernel::Kernel& kernel, const EcsConfig& config, stochastic::RngStream stream) {
  return std::make_unique<EcsModel>(kernel, config, stream);
}

}  // namespace scsmc::models
