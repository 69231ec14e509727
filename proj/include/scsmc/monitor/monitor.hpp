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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scsmc/bltl/formula.hpp"
#include "scsmc/kernel/kernel.hpp"
#include "scsmc/monitor/trace.hpp"

namespace scsmc::monitor {

class MonitorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Read access to one model attribute. The value is raw / scale.
struct Attribute {
  std::function<std::int64_t()> read;
  std::int64_t scale = 1;
};

/// Explicit instrumentation points. Models call hit(label) at the location
/// of interest; monitors subscribe to the labels they observe.
class ProbeHub {
 public:
  using Listener = std::function<void(std::string_view label)>;

  void hit(std::string_view label) const {
    for (const auto& l : listeners_) l(label);
  }
  std::size_t subscribe(Listener l) {
    listeners_.push_back(std::move(l));
    return listeners_.size() - 1;
  }
  void unsubscribe(std::size_t id) {
    if (id < listeners_.size()) listeners_[id] = [](std::string_view) {};
  }

 private:
  std::vector<Listener> listeners_;
};

/// A model whose state the monitor can read.
class Observable {
 public:
  virtual ~Observable() = default;
  virtual std::optional<Attribute> attribute(std::string_view path) const = 0;
  virtual std::vector<std::string> attribute_paths() const = 0;
  virtual ProbeHub& probes() = 0;
  /// Duration of one model time unit, in kernel ticks.
  virtual kernel::SimTime time_unit() const = 0;
};

struct ObservedVariable {
  enum class Source { ModelAttribute, KernelPhaseFlag, EventNotifiedFlag, ProbeLocation };

  std::string name;
  Source source = Source::ModelAttribute;
  /// Attribute path, phase marker name, event name or probe label.
  std::string path;

  /// Parses an attribute declaration target: `phase:<MARKER>`,
  /// `event:<name>`, `probe:<label>` (or `location:<label>`), or a model
  /// attribute path.
  static ObservedVariable declare(std::string path, std::string alias);
  friend bool operator==(const ObservedVariable&, const ObservedVariable&) = default;
};

/// One member of a temporal resolution.
struct TemporalEvent {
  enum class Kind { PhaseEnd, EventNotified, Predicate };
  Kind kind = Kind::PhaseEnd;
  kernel::Phase phase = kernel::Phase::TimedNotify;
  std::string event;
  /// Predicate over observed variables, unbound.
  bltl::Formula predicate;
  std::string text;

  /// Parses TIMED_NOTIFY_PHASE_END, DELTA_NOTIFY_PHASE_END,
  /// EVALUATE_PHASE_END, UPDATE_PHASE_END (each optionally prefixed with
  /// MON_), EVENT:<name>, or PREDICATE:<expression>.
  static TemporalEvent parse(std::string_view text);
};

using TemporalResolution = std::vector<TemporalEvent>;

/// Samples observed variables on every temporal-event occurrence and hands
/// states out lazily: the kernel only advances while no sampled state is
/// waiting to be consumed.
///
/// The timed-notification marker also fires at the end of initialization,
/// which opens simulated time 0.
class Session : public kernel::KernelObserver {
 public:
  Session(kernel::Kernel& kernel, Observable& model, TemporalResolution resolution,
          std::vector<ObservedVariable> variables, kernel::SimTime until = kernel::SimTime::max());
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;
  ~Session() override;

  const SchemaPtr& schema() const { return schema_; }
  const std::vector<ObservedVariable>& variables() const { return variables_; }

  /// Next sampled state, advancing the simulation as needed; nullopt when
  /// the simulation ends or reaches `until`.
  std::optional<TimedState> next();

  /// True once the simulation has ended with no pending activity.
  bool complete() const { return ended_ && complete_; }
  bool ended() const { return ended_; }
  std::uint64_t occurrences() const { return occurrences_; }

  /// Runs to the end (or `max_states`) and returns the collected trace.
  Trace collect(std::size_t max_states = static_cast<std::size_t>(-1));

  void on_phase_end(kernel::Phase phase) override;
  void on_event_notified(kernel::EventId event) override;

 private:
  TimedState capture(std::optional<kernel::Phase> phase) const;
  void sample(std::optional<kernel::Phase> phase);

  kernel::Kernel& kernel_;
  Observable& model_;
  std::vector<ObservedVariable> variables_;
  SchemaPtr schema_;
  kernel::SimTime until_;

  std::vector<kernel::Phase> phase_markers_;
  std::vector<kernel::EventId> sampling_events_;
  std::vector<bltl::Formula> predicates_;

  std::vector<Attribute> attributes_;  // per variable; empty read for non-attributes
  std::vector<kernel::Phase> phase_of_;  // per variable (KernelPhaseFlag)
  std::vector<kernel::EventId> event_of_;  // per variable (EventNotifiedFlag)
  std::vector<std::uint8_t> flags_;  // latched event/probe flags, cleared after each sample
  std::map<std::string, std::vector<std::size_t>, std::less<>> probe_slots_;
  std::optional<std::size_t> probe_subscription_;

  std::deque<TimedState> buffer_;
  std::uint64_t occurrences_ = 0;
  bool ended_ = false;
  bool complete_ = false;
};

kernel::Phase parse_phase_marker(std::string_view text);
std::string phase_marker_name(kernel::Phase phase);

}  // namespace scsmc::monitor
