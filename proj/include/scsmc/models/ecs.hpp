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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scsmc/kernel/kernel.hpp"
#include "scsmc/monitor/monitor.hpp"
#include "scsmc/stochastic/rng.hpp"

namespace scsmc::models {

enum class Classification { ProcessorsOnly, AnyDegradation };
std::string_view to_string(Classification c);
Classification parse_classification(std::string_view text);

enum class StateClass { Up, Danger, Shutdown };
std::string_view to_string(StateClass c);

// Durations below are in model time units (30 s each by default).
struct EcsConfig {
  int sensor_groups = 50;
  int sensors_per_group = 3;
  int sensors_needed_per_group = 2;
  int actuator_groups = 30;
  int actuators_per_group = 2;
  int actuators_needed_per_group = 1;
  int sensor_group_threshold = 37;
  int actuator_group_threshold = 27;
  int max_skipped = 4;  // K
  double cycle = 2.0;
  /// Ticks per time unit. With a millisecond resolution, 30000 ticks = 30 s.
  std::uint64_t ticks_per_unit = 30'000;
  /// A mean time of 0 disables the corresponding fault.
  double mttf_sensor = 86'400.0;
  double mttf_actuator = 172'800.0;
  double mttf_processor = 1'051'200.0;
  double mttf_transient = 2'880.0;
  /// Main-processor mean time to failure; unset means mttf_processor.
  std::optional<double> mttf_main;
  double reboot_time = 1.0;
  /// Draw reboot durations from Exp(1/reboot_time) instead of a fixed delay.
  bool exponential_reboot = false;
  /// Sampling tick period; the model notifies `tick` once per period.
  double tick = 1.0;
  Classification classification = Classification::ProcessorsOnly;

  double main_mttf() const { return mttf_main.value_or(mttf_processor); }
  void validate() const;
};

/// Component state of the embedded control system.
struct EcsState {
  std::vector<int> sensors;    // working sensors per group
  std::vector<int> actuators;  // working actuators per group
  int main = 1;                // 0 failed, 1 functional
  int proci = 2;               // 0 failed, 1 transient fault, 2 functional
  int proco = 2;
  int skipped = 0;
  bool halted = false;  // the system has been shut down

  int functional_sensor_groups(const EcsConfig& cfg) const;
  int functional_actuator_groups(const EcsConfig& cfg) const;
};

struct FailureFlags {
  bool failure_1 = false;  // too few sensor groups, reported by a working input processor
  bool failure_2 = false;  // too few actuator groups, reported by a working output processor
  bool failure_3 = false;  // more than K consecutive skipped cycles
  bool failure_4 = false;  // main processor failure
  bool shutdown() const { return failure_1 || failure_2 || failure_3 || failure_4; }
};

FailureFlags failure_predicates(const EcsState& s, const EcsConfig& cfg);
StateClass class_of(const EcsState& s, const EcsConfig& cfg);

/// CTMC reliability model realized with exponential timers on the kernel.
///
/// Attributes (integers unless noted): sensor_groups, actuator_groups,
/// main, proci, proco, skipped, failure_1..failure_4, shutdown, up, danger,
/// class (0 up, 1 danger, 2 shutdown), reboots_i, reboots_o, reboots, and
/// the fixed-point rewards reward_up, reward_danger, reward_shutdown,
/// elapsed (time units, scale = ticks per unit). Events: tick, cycle,
/// shutdown_event, transition.
class EcsModel : public monitor::Observable {
 public:
  EcsModel(kernel::Kernel& kernel, EcsConfig config, stochastic::RngStream stream);

  std::optional<monitor::Attribute> attribute(std::string_view path) const override;
  std::vector<std::string> attribute_paths() const override;
  monitor::ProbeHub& probes() override { return probes_; }
  kernel::SimTime time_unit() const override { return kernel::SimTime{config_.ticks_per_unit}; }

  const EcsConfig& config() const { return config_; }
  const EcsState& state() const { return state_; }
  FailureFlags failures() const { return failure_predicates(state_, config_); }
  StateClass state_class() const { return class_of(state_, config_); }
  std::uint64_t reboots_i() const { return reboots_i_; }
  std::uint64_t reboots_o() const { return reboots_o_; }

  /// Time spent in class c up to now, in ticks.
  std::uint64_t reward_ticks(StateClass c) const;

  /// Forces a permanent input-processor failure at the current instant.
  /// Intended for scenario tests before the simulation starts.
  void inject_proci_failure();

 private:
  kernel::SimTime units(double u) const;
  kernel::SimTime exp_delay(double mean_units);
  void before_transition();
  void after_transition();

  kernel::Process component(int* slot, double mttf);
  kernel::Process main_processor();
  kernel::Process io_processor(int* proc, std::uint64_t* reboots, const char* name);
  kernel::Process cycle();
  kernel::Process ticker();

  kernel::Kernel& kernel_;
  EcsConfig config_;
  stochastic::RngStream rng_;
  monitor::ProbeHub probes_;
  EcsState state_;

  std::uint64_t reboots_i_ = 0;
  std::uint64_t reboots_o_ = 0;
  std::array<std::uint64_t, 3> reward_{};  // indexed by StateClass
  kernel::SimTime accounted_{};             // rewards are settled up to here
  StateClass current_class_ = StateClass::Up;

  kernel::EventId tick_;
  kernel::EventId cycle_;
  kernel::EventId shutdown_;
  kernel::EventId transition_;
};

std::unique_ptr<EcsModel> build_ecs(kernel::Kernel& kernel, const EcsConfig& config, stochastic::RngStream stream);

}  // namespace scsmc::models
