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

#include "scsmc/kernel/kernel.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace scsmc::kernel {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Initialize: return "Initialize";
    case Phase::Evaluate: return "Evaluate";
    case Phase::Update: return "Update";
    case Phase::DeltaNotify: return "DeltaNotify";
    case Phase::TimedNotify: return "TimedNotify";
    case Phase::End: return "End";
  }
  return "?";
}

std::string_view to_string(ExitReason reason) {
  switch (reason) {
    case ExitReason::TimeExhausted: return "TimeExhausted";
    case ExitReason::NoMoreWork: return "NoMoreWork";
    case ExitReason::ObserverStop: return "ObserverStop";
  }
  return "?";
}

Kernel::Kernel(KernelOptions options) : options_(std::move(options)) {}

Kernel::~Kernel() = default;

EventId Kernel::create_event(std::string name) {
  if (events_.size() >= std::numeric_limits<std::uint32_t>::max()) throw KernelError("too many events");
  events_.push_back(EventRecord{.name = std::move(name)});
  return EventId{static_cast<std::uint32_t>(events_.size() - 1)};
}

std::optional<EventId> Kernel::find_event(std::string_view name) const {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].name == name) return EventId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

const std::string& Kernel::event_name(EventId e) const { return events_.at(e.index).name; }

Pid Kernel::add_process(ProcessRecord record) {
  if (started_) throw KernelError("cannot register process '" + record.name + "' after simulation start");
  const Pid pid = static_cast<Pid>(processes_.size());
  record.timeout_event = create_event(record.name + ".timeout");
  for (EventId e : record.static_sensitivity) events_.at(e.index).static_waiters.push_back(pid);
  processes_.push_back(std::move(record));
  return pid;
}

Pid Kernel::spawn_thread(std::string name, Process body, ProcessOptions options) {
  if (!body.valid()) throw KernelError("thread process '" + name + "' has no body");
  ProcessRecord record;
  record.name = std::move(name);
  record.kind = ProcessKind::Thread;
  record.resume_point = body.handle();
  record.thread = std::move(body);
  record.static_sensitivity = std::move(options.sensitivity);
  record.dont_initialize = options.dont_initialize;
  return add_process(std::move(record));
}

Pid Kernel::spawn_method(std::string name, std::function<void()> body, ProcessOptions options) {
  if (!body) throw KernelError("method process '" + name + "' has no body");
  ProcessRecord record;
  record.name = std::move(name);
  record.kind = ProcessKind::Method;
  record.method = std::move(body);
  record.static_sensitivity = std::move(options.sensitivity);
  record.dont_initialize = options.dont_initialize;
  return add_process(std::move(record));
}

void Kernel::add_observer(KernelObserver* observer) { observers_.push_back(observer); }

void Kernel::remove_observer(KernelObserver* observer) { std::erase(observers_, observer); }

void Kernel::notify(EventId e) {
  EventRecord& ev = events_.at(e.index);
  // Immediate takes effect before any pending delta or timed notification.
  ev.pending = EventPending{};
  ++ev.generation;
  for (KernelObserver* o : observers_) o->on_event_notified(e);
  trigger(e);
}

void Kernel::notify(EventId e, SimTime delay) {
  EventRecord& ev = events_.at(e.index);
  if (delay.is_zero()) {
    if (ev.pending.kind != EventPending::Kind::Delta) {
      ev.pending = EventPending{EventPending::Kind::Delta, now_};
      ++ev.generation;
      if (!ev.in_delta_set) {
        ev.in_delta_set = true;
        delta_events_.push_back(e);
      }
    }
  } else {
    const SimTime at = now_ + delay;
    const bool earlier = ev.pending.kind == EventPending::Kind::None ||
                         (ev.pending.kind == EventPending::Kind::Timed && at < ev.pending.at);
    if (earlier) {
      ev.pending = EventPending{EventPending::Kind::Timed, at};
      ++ev.generation;
      timed_.push(TimedEntry{at, timed_seq_++, e, ev.generation});
    }
  }
  for (KernelObserver* o : observers_) o->on_event_notified(e);
}

void Kernel::cancel(EventId e) {
  EventRecord& ev = events_.at(e.index);
  if (ev.pending.kind != EventPending::Kind::None) {
    ev.pending = EventPending{};
    ++ev.generation;
  }
}

EventPending Kernel::pending(EventId e) const { return events_.at(e.index).pending; }

void Kernel::request_update(PrimitiveChannel& channel) {
  if (!channel.update_requested_) {
    channel.update_requested_ = true;
    updates_.push_back(&channel);
  }
}

Kernel::WaitAwaiter Kernel::wait() { return WaitAwaiter(*this, WaitKind::Static, {}, {}); }

Kernel::WaitAwaiter Kernel::wait(EventId e) { return WaitAwaiter(*this, WaitKind::Event, {e}, {}); }

Kernel::WaitAwaiter Kernel::wait(SimTime delay) { return WaitAwaiter(*this, WaitKind::Time, {}, delay); }

Kernel::WaitAwaiter Kernel::wait(SimTime timeout, EventId e) {
  return WaitAwaiter(*this, WaitKind::EventTimeout, {e}, timeout);
}

Kernel::WaitAwaiter Kernel::wait_any(std::vector<EventId> events) {
  if (events.empty()) throw KernelError("wait_any on an empty event set");
  return WaitAwaiter(*this, WaitKind::Any, std::move(events), {});
}

Kernel::WaitAwaiter Kernel::wait_all(std::vector<EventId> events) {
  if (events.empty()) throw KernelError("wait_all on an empty event set");
  return WaitAwaiter(*this, WaitKind::All, std::move(events), {});
}

void Kernel::WaitAwaiter::await_suspend(std::coroutine_handle<> h) {
  kernel_->suspend_current(h, kind_, events_, delay_);
}

bool Kernel::WaitAwaiter::await_resume() const noexcept {
  const auto pid = kernel_->current_;
  return pid && kernel_->processes_[*pid].timed_out;
}

void Kernel::suspend_current(std::coroutine_handle<> h, WaitKind kind, const std::vector<EventId>& events,
                             SimTime delay) {
  if (!current_) throw KernelError("wait() called outside a thread process");
  const Pid pid = *current_;
  ProcessRecord& p = processes_[pid];
  p.resume_point = h;
  p.status = ProcessStatus::Waiting;
  p.wait_kind = kind;
  p.timed_out = false;
  const std::uint64_t stamp = ++p.wait_stamp;

  auto register_on = [&](EventId e) { events_.at(e.index).dynamic_waiters.emplace_back(pid, stamp); };

  switch (kind) {
    case WaitKind::None:
    case WaitKind::Static:
      break;
    case WaitKind::Event:
    case WaitKind::Any:
      for (EventId e : events) register_on(e);
      break;
    case WaitKind::All: {
      std::vector<EventId> unique;
      for (EventId e : events) {
        if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
      }
      p.all_remaining = unique.size();
      for (EventId e : unique) register_on(e);
      break;
    }
    case WaitKind::Time:
      cancel(p.timeout_event);
      register_on(p.timeout_event);
      notify(p.timeout_event, delay);
      break;
    case WaitKind::EventTimeout:
      cancel(p.timeout_event);
      register_on(events.front());
      register_on(p.timeout_event);
      notify(p.timeout_event, delay);
      break;
  }
}

void Kernel::step() {
  if (++steps_this_resumption_ > options_.step_budget) {
    const std::string who = current_ ? processes_[*current_].name : std::string("<kernel>");
    throw RunawayProcess("process '" + who + "' exceeded its step budget without suspending");
  }
}

void Kernel::make_runnable(Pid pid) {
  ProcessRecord& p = processes_[pid];
  p.status = ProcessStatus::Runnable;
  p.wait_kind = WaitKind::None;
  ++p.wait_stamp;
  if (!p.in_runnable) {
    p.in_runnable = true;
    runnable_.push_back(pid);
  }
}

void Kernel::trigger(EventId e) {
  EventRecord& ev = events_[e.index];
  auto waiters = std::move(ev.dynamic_waiters);
  ev.dynamic_waiters.clear();
  for (auto [pid, stamp] : waiters) {
    ProcessRecord& p = processes_[pid];
    if (p.status != ProcessStatus::Waiting || p.wait_stamp != stamp) continue;
    switch (p.wait_kind) {
      case WaitKind::All:
        if (--p.all_remaining == 0) make_runnable(pid);
        break;
      case WaitKind::EventTimeout: {
        const bool by_timeout = e == p.timeout_event;
        if (!by_timeout) cancel(p.timeout_event);
        make_runnable(pid);
        p.timed_out = by_timeout;
        break;
      }
      default:
        make_runnable(pid);
        break;
    }
  }
  for (Pid pid : events_[e.index].static_waiters) {
    ProcessRecord& p = processes_[pid];
    if (p.status == ProcessStatus::Waiting && p.wait_kind == WaitKind::Static) make_runnable(pid);
  }
}

void Kernel::evaluate(Pid pid) {
  if (current_) throw KernelError("re-entrant process dispatch");
  ProcessRecord& p = processes_[pid];
  current_ = pid;
  steps_this_resumption_ = 0;
  struct Reset {
    std::optional<Pid>& slot;
    ~Reset() { slot.reset(); }
  } reset{current_};

  if (p.kind == ProcessKind::Method) {
    p.method();
    p.status = ProcessStatus::Waiting;
    p.wait_kind = WaitKind::Static;
    return;
  }

  p.resume_point.resume();
  if (p.thread.done()) {
    p.status = ProcessStatus::Terminated;
    if (auto err = p.thread.handle().promise().error) std::rethrow_exception(err);
    return;
  }
  if (p.status != ProcessStatus::Waiting) {
    throw KernelError("thread process '" + p.name + "' suspended without waiting on the kernel");
  }
}

void Kernel::initialize() {
  started_ = true;
  phase_ = Phase::Initialize;
  {
    auto pending = std::move(updates_);
    updates_.clear();
    for (PrimitiveChannel* ch : pending) {
      ch->update_requested_ = false;
      ch->update();
    }
  }
  std::vector<Pid> order(processes_.size());
  std::iota(order.begin(), order.end(), Pid{0});
  if (options_.shuffle_seed) {
    std::mt19937_64 rng(*options_.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  for (Pid pid : order) {
    if (!processes_[pid].dont_initialize) make_runnable(pid);
  }
  auto deltas = std::move(delta_events_);
  delta_events_.clear();
  for (EventId e : deltas) {
    EventRecord& ev = events_[e.index];
    ev.in_delta_set = false;
    if (ev.pending.kind == EventPending::Kind::Delta) {
      ev.pending = EventPending{};
      trigger(e);
    }
  }
  initialized_ = true;
  emit_phase_end(Phase::Initialize);
}

void Kernel::run_delta_cycle() {
  if (++deltas_at_now_ > options_.delta_budget) {
    throw KernelError("delta cycle budget exhausted at time " + to_string(now_));
  }
  phase_ = Phase::Evaluate;
  while (!runnable_.empty()) {
    const Pid pid = runnable_.front();
    runnable_.pop_front();
    processes_[pid].in_runnable = false;
    if (processes_[pid].status == ProcessStatus::Runnable) evaluate(pid);
  }
  emit_phase_end(Phase::Evaluate);

  phase_ = Phase::Update;
  auto pending = std::move(updates_);
  updates_.clear();
  for (PrimitiveChannel* ch : pending) {
    ch->update_requested_ = false;
    ch->update();
  }
  emit_phase_end(Phase::Update);

  phase_ = Phase::DeltaNotify;
  auto deltas = std::move(delta_events_);
  delta_events_.clear();
  for (EventId e : deltas) {
    EventRecord& ev = events_[e.index];
    ev.in_delta_set = false;
    if (ev.pending.kind == EventPending::Kind::Delta) {
      ev.pending = EventPending{};
      trigger(e);
    }
  }
  ++delta_count_;
  emit_phase_end(Phase::DeltaNotify);
}

void Kernel::drop_stale_timed() {
  while (!timed_.empty()) {
    const TimedEntry& top = timed_.top();
    const EventRecord& ev = events_[top.event.index];
    if (ev.pending.kind == EventPending::Kind::Timed && ev.generation == top.generation) return;
    timed_.pop();
  }
}

std::optional<SimTime> Kernel::next_timed_notification() const {
  auto copy = timed_;
  while (!copy.empty()) {
    const TimedEntry& top = copy.top();
    const EventRecord& ev = events_[top.event.index];
    if (ev.pending.kind == EventPending::Kind::Timed && ev.generation == top.generation) return top.at;
    copy.pop();
  }
  return std::nullopt;
}

void Kernel::timed_notification_phase() {
  const SimTime at = timed_.top().at;
  now_ = at;
  deltas_at_now_ = 0;
  phase_ = Phase::TimedNotify;
  std::vector<EventId> due;
  while (!timed_.empty() && timed_.top().at == at) {
    const TimedEntry entry = timed_.top();
    timed_.pop();
    EventRecord& ev = events_[entry.event.index];
    if (ev.pending.kind == EventPending::Kind::Timed && ev.generation == entry.generation) {
      ev.pending = EventPending{};
      due.push_back(entry.event);
    }
  }
  for (EventId e : due) trigger(e);
  emit_phase_end(Phase::TimedNotify);
}

bool Kernel::advance(SimTime until) {
  if (!initialized_) {
    initialize();
    return true;
  }
  if (!runnable_.empty() || !delta_events_.empty() || !updates_.empty()) {
    run_delta_cycle();
    return true;
  }
  drop_stale_timed();
  if (timed_.empty()) {
    phase_ = Phase::End;
    return false;
  }
  if (timed_.top().at > until) {
    if (until != SimTime::max() && until > now_) now_ = until;
    phase_ = Phase::End;
    return false;
  }
  timed_notification_phase();
  return true;
}

bool Kernel::has_pending_activity() const {
  return !runnable_.empty() || !delta_events_.empty() || !updates_.empty() || next_timed_notification().has_value();
}

ExitReason Kernel::run(SimTime until) {
  while (advance(until)) {
    if (stop_requested()) return ExitReason::ObserverStop;
  }
  if (has_pending_activity()) return ExitReason::TimeExhausted;
  return ExitReason::NoMoreWork;
}

bool Kernel::stop_requested() const {
  return std::any_of(observers_.begin(), observers_.end(), [](const KernelObserver* o) { return o->stop_requested(); });
}

void Kernel::emit_phase_end(Phase phase) {
  for (KernelObserver* o : observers_) o->on_phase_end(phase);
}

ProcessStatus Kernel::status(Pid pid) const { return processes_.at(pid).status; }

const std::string& Kernel::process_name(Pid pid) const { return processes_.at(pid).name; }

}  // namespace scsmc::kernel
