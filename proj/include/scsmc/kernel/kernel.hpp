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

#include <coroutine>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scsmc/kernel/process.hpp"
#include "scsmc/kernel/sim_time.hpp"

namespace scsmc::kernel {

/// Opaque handle of an event owned by a kernel.
struct EventId {
  std::uint32_t index = 0;
  friend constexpr bool operator==(EventId, EventId) = default;
};

using Pid = std::uint32_t;

enum class ProcessKind { Thread, Method };

enum class Phase { Initialize, Evaluate, Update, DeltaNotify, TimedNotify, End };
std::string_view to_string(Phase phase);

enum class ExitReason { TimeExhausted, NoMoreWork, ObserverStop };
std::string_view to_string(ExitReason reason);

/// Pending notification of an event. At most one per event.
struct EventPending {
  enum class Kind { None, Delta, Timed };
  Kind kind = Kind::None;
  SimTime at{};
};

/// What a waiting process is waiting for.
enum class WaitKind { None, Static, Event, Any, All, Time, EventTimeout };

enum class ProcessStatus { Runnable, Waiting, Terminated };

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RunawayProcess : public KernelError {
 public:
  using KernelError::KernelError;
};

/// Hooks invoked by the scheduler. All callbacks run on the kernel's thread.
class KernelObserver {
 public:
  virtual ~KernelObserver() = default;
  /// Called when a phase completes. Initialize fires once, after the
  /// initialization phase; TimedNotify fires after every clock advance.
  virtual void on_phase_end(Phase /*phase*/) {}
  /// Called from inside notify(), after the notification has been recorded.
  virtual void on_event_notified(EventId /*event*/) {}
  virtual bool stop_requested() const { return false; }
};

/// Primitive channel with an update phase.
class PrimitiveChannel {
 public:
  virtual ~PrimitiveChannel() = default;
  virtual void update() = 0;

 private:
  friend class Kernel;
  bool update_requested_ = false;
};

struct ProcessOptions {
  bool dont_initialize = false;
  std::vector<EventId> sensitivity;
};

struct KernelOptions {
  Resolution resolution{};
  /// Internal steps a process may report via `step()` within one resumption.
  std::uint64_t step_budget = 10'000'000;
  /// Delta cycles allowed at a single simulated instant.
  std::uint64_t delta_budget = 10'000'000;
  /// When set, the initial runnable set is shuffled with this seed.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Cooperative discrete-event scheduler with delta cycles and an update
/// phase. Single-threaded; one instance per simulation.
class Kernel {
 public:
  explicit Kernel(KernelOptions options = {});
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;
  ~Kernel();

  // Elaboration ------------------------------------------------------------

  EventId create_event(std::string name);
  std::optional<EventId> find_event(std::string_view name) const;
  const std::string& event_name(EventId e) const;
  std::size_t event_count() const { return events_.size(); }

  Pid spawn_thread(std::string name, Process body, ProcessOptions options = {});
  Pid spawn_method(std::string name, std::function<void()> body, ProcessOptions options = {});

  void add_observer(KernelObserver* observer);
  void remove_observer(KernelObserver* observer);

  // Notification -----------------------------------------------------------

  /// Immediate notification: sensitive processes become runnable before
  /// this call returns.
  void notify(EventId e);
  /// Delayed notification; a zero delay is a delta notification.
  void notify(EventId e, SimTime delay);
  void notify_delta(EventId e) { notify(e, SimTime::zero()); }
  void cancel(EventId e);
  EventPending pending(EventId e) const;

  void request_update(PrimitiveChannel& channel);

  // Waiting (only from inside a running thread process) --------------------

  class WaitAwaiter {
   public:
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h);
    /// True when a timed wait-with-event resumed because of the timeout.
    bool await_resume() const noexcept;

   private:
    friend class Kernel;
    WaitAwaiter(Kernel& k, WaitKind kind, std::vector<EventId> events, SimTime delay)
        : kernel_(&k), kind_(kind), events_(std::move(events)), delay_(delay) {}
    Kernel* kernel_;
    WaitKind kind_;
    std::vector<EventId> events_;
    SimTime delay_;
  };

  /// Waits on the static sensitivity list.
  WaitAwaiter wait();
  WaitAwaiter wait(EventId e);
  /// Waits `delay` ticks; a zero delay waits one delta cycle.
  WaitAwaiter wait(SimTime delay);
  WaitAwaiter wait(SimTime timeout, EventId e);
  WaitAwaiter wait_any(std::vector<EventId> events);
  WaitAwaiter wait_all(std::vector<EventId> events);

  /// Counts one internal step of the running process against the step
  /// budget; throws RunawayProcess once the budget is exhausted.
  void step();

  // Simulation -------------------------------------------------------------

  /// Executes one scheduling unit: initialization, one delta cycle, or one
  /// timed-notification phase. Returns false when no further unit can run
  /// without passing `until` (or when nothing is left to do).
  bool advance(SimTime until = SimTime::max());

  ExitReason run(SimTime until = SimTime::max());

  SimTime now() const { return now_; }
  Phase phase() const { return phase_; }
  std::uint64_t delta_count() const { return delta_count_; }
  bool started() const { return started_; }
  bool has_pending_activity() const;
  std::optional<SimTime> next_timed_notification() const;
  const Resolution& resolution() const { return options_.resolution; }
  std::optional<Pid> current_process() const { return current_; }
  ProcessStatus status(Pid pid) const;
  const std::string& process_name(Pid pid) const;
  std::size_t process_count() const { return processes_.size(); }

 private:
  struct EventRecord {
    std::string name;
    EventPending pending;
    std::uint64_t generation = 0;  // invalidates stale timed-queue entries
    bool in_delta_set = false;
    std::vector<std::pair<Pid, std::uint64_t>> dynamic_waiters;  // (pid, wait stamp)
    std::vector<Pid> static_waiters;
  };

  struct ProcessRecord {
    std::string name;
    ProcessKind kind = ProcessKind::Thread;
    Process thread;
    std::coroutine_handle<> resume_point;
    std::function<void()> method;
    std::vector<EventId> static_sensitivity;
    bool dont_initialize = false;
    ProcessStatus status = ProcessStatus::Waiting;
    WaitKind wait_kind = WaitKind::Static;
    std::uint64_t wait_stamp = 0;
    std::size_t all_remaining = 0;
    EventId timeout_event{};
    bool timed_out = false;
    bool in_runnable = false;
  };

  struct TimedEntry {
    SimTime at;
    std::uint64_t seq;
    EventId event;
    std::uint64_t generation;
    friend bool operator>(const TimedEntry& a, const TimedEntry& b) {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  Pid add_process(ProcessRecord record);
  void initialize();
  void run_delta_cycle();
  void timed_notification_phase();
  void evaluate(Pid pid);
  void trigger(EventId e);
  void make_runnable(Pid pid);
  void suspend_current(std::coroutine_handle<> h, WaitKind kind, const std::vector<EventId>& events, SimTime delay);
  void drop_stale_timed();
  void emit_phase_end(Phase phase);
  bool stop_requested() const;

  KernelOptions options_;
  std::vector<EventRecord> events_;
  std::vector<ProcessRecord> processes_;
  std::deque<Pid> runnable_;                  // R
  std::vector<EventId> delta_events_;         // D
  std::vector<PrimitiveChannel*> updates_;    // U
  std::priority_queue<TimedEntry, std::vector<TimedEntry>, std::greater<>> timed_;  // T
  std::vector<KernelObserver*> observers_;
  SimTime now_{};
  Phase phase_ = Phase::Initialize;
  std::uint64_t delta_count_ = 0;
  std::uint64_t deltas_at_now_ = 0;
  std::uint64_t timed_seq_ = 0;
  std::uint64_t steps_this_resumption_ = 0;
  std::optional<Pid> current_;
  bool started_ = false;
  bool initialized_ = false;
};

/// Signal-like primitive channel: writes become visible in the update
/// phase, and a change of value delta-notifies value_changed_event().
template <typename T>
class Signal : public PrimitiveChannel {
 public:
  Signal(Kernel& kernel, std::string name, T initial = T{})
      : kernel_(kernel), current_(initial), next_(initial), changed_(kernel.create_event(name + ".value_changed")) {}

  const T& read() const { return current_; }
  void write(const T& value) {
    next_ = value;
    kernel_.request_update(*this);
  }
  EventId value_changed_event() const { return changed_; }

  void update() override {
    if (!(next_ == current_)) {
      current_ = next_;
      kernel_.notify_delta(changed_);
    }
  }

 private:
  Kernel& kernel_;
  T current_;
  T next_;
  EventId changed_;
};

}  // namespace scsmc::kernel
