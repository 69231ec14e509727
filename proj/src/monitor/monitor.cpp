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

#include "scsmc/monitor/monitor.hpp"

#include <algorithm>
#include <cctype>

#include "scsmc/bltl/evaluator.hpp"
#include "scsmc/bltl/parser.hpp"

namespace scsmc::monitor {

namespace {

std::string upper(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && upper(s.substr(0, prefix.size())) == upper(prefix);
}

}  // namespace

kernel::Phase parse_phase_marker(std::string_view text) {
  std::string u = upper(text);
  if (u.starts_with("MON_")) u.erase(0, 4);
  if (u == "TIMED_NOTIFY_PHASE_END" || u == "END_SC") return kernel::Phase::TimedNotify;
  if (u == "DELTA_NOTIFY_PHASE_END" || u == "DELTA_CYCLE_END") return kernel::Phase::DeltaNotify;
  if (u == "EVALUATE_PHASE_END" || u == "EVALUATION_PHASE_END") return kernel::Phase::Evaluate;
  if (u == "UPDATE_PHASE_END") return kernel::Phase::Update;
  if (u == "INIT_PHASE_END" || u == "INITIALIZATION_PHASE_END") return kernel::Phase::Initialize;
  throw MonitorError("unknown kernel phase marker '" + std::string(text) + "'");
}

std::string phase_marker_name(kernel::Phase phase) {
  switch (phase) {
    case kernel::Phase::TimedNotify: return "TIMED_NOTIFY_PHASE_END";
    case kernel::Phase::DeltaNotify: return "DELTA_NOTIFY_PHASE_END";
    case kernel::Phase::Evaluate: return "EVALUATE_PHASE_END";
    case kernel::Phase::Update: return "UPDATE_PHASE_END";
    case kernel::Phase::Initialize: return "INIT_PHASE_END";
    case kernel::Phase::End: break;
  }
  throw MonitorError("phase has no marker");
}

ObservedVariable ObservedVariable::declare(std::string path, std::string alias) {
  ObservedVariable v;
  v.name = std::move(alias);
  if (starts_with_ci(path, "phase:")) {
    v.source = Source::KernelPhaseFlag;
    v.path = path.substr(6);
  } else if (starts_with_ci(path, "event:")) {
    v.source = Source::EventNotifiedFlag;
    v.path = path.substr(6);
  } else if (starts_with_ci(path, "probe:")) {
    v.source = Source::ProbeLocation;
    v.path = path.substr(6);
  } else if (starts_with_ci(path, "location:")) {
    v.source = Source::ProbeLocation;
    v.path = path.substr(9);
  } else {
    v.source = Source::ModelAttribute;
    v.path = std::move(path);
  }
  if (v.path.empty()) throw MonitorError("empty source for variable '" + v.name + "'");
  return v;
}

TemporalEvent TemporalEvent::parse(std::string_view text) {
  TemporalEvent ev;
  ev.text = std::string(text);
  if (starts_with_ci(text, "EVENT:")) {
    ev.kind = Kind::EventNotified;
    ev.event = std::string(text.substr(6));
    if (ev.event.empty()) throw MonitorError("EVENT: needs an event name");
  } else if (starts_with_ci(text, "PREDICATE:")) {
    ev.kind = Kind::Predicate;
    ev.predicate = bltl::parse_formula(text.substr(10));
    const auto h = bltl::horizon(ev.predicate);
    if (h.steps != 0 || h.time_units != 0.0) throw MonitorError("temporal-event predicates cannot use temporal operators");
  } else {
    ev.kind = Kind::PhaseEnd;
    ev.phase = parse_phase_marker(text);
  }
  return ev;
}

Session::Session(kernel::Kernel& kernel, Observable& model, TemporalResolution resolution,
                 std::vector<ObservedVariable> variables, kernel::SimTime until)
    : kernel_(kernel), model_(model), variables_(std::move(variables)), until_(until) {
  if (resolution.empty()) throw MonitorError("temporal resolution must not be empty");

  std::vector<std::string> names;
  std::vector<std::int64_t> scales;
  attributes_.resize(variables_.size());
  phase_of_.resize(variables_.size(), kernel::Phase::End);
  event_of_.resize(variables_.size());
  flags_.assign(variables_.size(), 0);
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& v = variables_[i];
    names.push_back(v.name);
    std::int64_t scale = 1;
    switch (v.source) {
      case ObservedVariable::Source::ModelAttribute: {
        auto attr = model_.attribute(v.path);
        if (!attr) throw MonitorError("unresolvable attribute path '" + v.path + "' for variable '" + v.name + "'");
        scale = attr->scale;
        attributes_[i] = std::move(*attr);
        break;
      }
      case ObservedVariable::Source::KernelPhaseFlag:
        phase_of_[i] = parse_phase_marker(v.path);
        break;
      case ObservedVariable::Source::EventNotifiedFlag: {
        auto e = kernel_.find_event(v.path);
        if (!e) throw MonitorError("unknown event '" + v.path + "' for variable '" + v.name + "'");
        event_of_[i] = *e;
        break;
      }
      case ObservedVariable::Source::ProbeLocation:
        probe_slots_[v.path].push_back(i);
        break;
    }
    scales.push_back(scale);
  }
  schema_ = std::make_shared<const Schema>(std::move(names), std::move(scales));

  for (const auto& ev : resolution) {
    switch (ev.kind) {
      case TemporalEvent::Kind::PhaseEnd:
        phase_markers_.push_back(ev.phase);
        break;
      case TemporalEvent::Kind::EventNotified: {
        auto e = kernel_.find_event(ev.event);
        if (!e) throw MonitorError("unknown event '" + ev.event + "' in temporal resolution");
        sampling_events_.push_back(*e);
        break;
      }
      case TemporalEvent::Kind::Predicate:
        predicates_.push_back(bltl::bind(ev.predicate, *schema_, model_.time_unit().ticks()));
        break;
    }
  }

  if (!probe_slots_.empty()) {
    probe_subscription_ = model_.probes().subscribe([this](std::string_view label) {
      auto it = probe_slots_.find(label);
      if (it == probe_slots_.end()) return;
      for (std::size_t i : it->second) flags_[i] = 1;
    });
  }
  kernel_.add_observer(this);
}

Session::~Session() {
  kernel_.remove_observer(this);
  if (probe_subscription_) model_.probes().unsubscribe(*probe_subscription_);
}

TimedState Session::capture(std::optional<kernel::Phase> phase) const {
  TimedState s;
  s.time = kernel_.now();
  s.values.resize(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    switch (variables_[i].source) {
      case ObservedVariable::Source::ModelAttribute:
        s.values[i] = attributes_[i].read();
        break;
      case ObservedVariable::Source::KernelPhaseFlag: {
        const kernel::Phase want = phase_of_[i];
        const bool hit = phase && (*phase == want || (want == kernel::Phase::TimedNotify && *phase == kernel::Phase::Initialize));
        s.values[i] = hit ? 1 : 0;
        break;
      }
      case ObservedVariable::Source::EventNotifiedFlag:
      case ObservedVariable::Source::ProbeLocation:
        s.values[i] = flags_[i];
        break;
    }
  }
  return s;
}

void Session::sample(std::optional<kernel::Phase> phase) {
  ++occurrences_;
  buffer_.push_back(capture(phase));
  std::fill(flags_.begin(), flags_.end(), std::uint8_t{0});
}

void Session::on_phase_end(kernel::Phase phase) {
  for (kernel::Phase marker : phase_markers_) {
    if (marker == phase || (marker == kernel::Phase::TimedNotify && phase == kernel::Phase::Initialize)) {
      sample(phase);
    }
  }
  if (phase == kernel::Phase::DeltaNotify && !predicates_.empty()) {
    const TimedState now = capture(phase);
    for (const auto& p : predicates_) {
      if (bltl::evaluate_state(now, p)) sample(phase);
    }
  }
}

void Session::on_event_notified(kernel::EventId event) {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].source == ObservedVariable::Source::EventNotifiedFlag && event_of_[i] == event) flags_[i] = 1;
  }
  for (kernel::EventId e : sampling_events_) {
    if (e == event) sample(std::nullopt);
  }
}

std::optional<TimedState> Session::next() {
  while (buffer_.empty() && !ended_) {
    if (!kernel_.advance(until_)) {
      ended_ = true;
      complete_ = !kernel_.has_pending_activity();
    }
  }
  if (buffer_.empty()) return std::nullopt;
  TimedState s = std::move(buffer_.front());
  buffer_.pop_front();
  return s;
}

Trace Session::collect(std::size_t max_states) {
  Trace t;
  t.schema = schema_;
  while (t.states.size() < max_states) {
    auto s = next();
    if (!s) break;
    t.states.push_back(std::move(*s));
  }
  t.complete = complete() && buffer_.empty();
  return t;
}

}  // namespace scsmc::monitor
