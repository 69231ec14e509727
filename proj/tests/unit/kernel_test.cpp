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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "scsmc/kernel/kernel.hpp"

namespace {

using namespace scsmc::kernel;

struct Log {
  Kernel* k;
  std::vector<std::string> lines;
  void add(const std::string& who) {
    lines.push_back(who + "@" + std::to_string(k->now().ticks()) + "/" + std::to_string(k->delta_count()));
  }
};

class PhaseRecorder : public KernelObserver {
 public:
  std::vector<Phase> phases;
  std::vector<std::uint64_t> times;
  std::size_t stop_after = 0;
  void on_phase_end(Phase p) override {
    phases.push_back(p);
    times.push_back(now_source->now().ticks());
  }
  bool stop_requested() const override { return stop_after != 0 && phases.size() >= stop_after; }
  Kernel* now_source = nullptr;
};

// --- scripted two-process scenarios -------------------------------------

Process notifier(Kernel& k, Log& log, EventId e, int mode) {
  co_await k.wait(SimTime{10});
  log.add("A:notify");
  if (mode == 0) k.notify(e);
  if (mode == 1) k.notify_delta(e);
  if (mode == 2) k.notify(e, SimTime{5});
  log.add("A:after");
  co_await k.wait(SimTime{100});
  log.add("A:done");
}

Process waiter(Kernel& k, Log& log, EventId e) {
  log.add("B:start");
  co_await k.wait(e);
  log.add("B:woke");
}

std::vector<std::string> scenario(int mode) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("e");
  k.spawn_thread("A", notifier(k, log, e, mode));
  k.spawn_thread("B", waiter(k, log, e));
  EXPECT_EQ(k.run(), ExitReason::NoMoreWork);
  return log.lines;
}

TEST(KernelGolden, ImmediateNotificationRunsWaiterInSameEvaluation) {
  // Delta 0 is initialization's evaluation; t=10 opens delta 1.
  EXPECT_EQ(scenario(0), (std::vector<std::string>{"B:start@0/0", "A:notify@10/1", "A:after@10/1", "B:woke@10/1",
                                                   "A:done@110/2"}));
}

TEST(KernelGolden, DeltaNotificationRunsWaiterInNextDeltaCycle) {
  EXPECT_EQ(scenario(1), (std::vector<std::string>{"B:start@0/0", "A:notify@10/1", "A:after@10/1", "B:woke@10/2",
                                                   "A:done@110/3"}));
}

TEST(KernelGolden, TimedNotificationAdvancesClock) {
  EXPECT_EQ(scenario(2), (std::vector<std::string>{"B:start@0/0", "A:notify@10/1", "A:after@10/1", "B:woke@15/2",
                                                   "A:done@110/3"}));
}

TEST(KernelGolden, PhaseOrderPerDeltaCycle) {
  Kernel k;
  Log log{&k, {}};
  PhaseRecorder rec;
  rec.now_source = &k;
  k.add_observer(&rec);
  const EventId e = k.create_event("e");
  k.spawn_thread("A", notifier(k, log, e, 1));
  k.spawn_thread("B", waiter(k, log, e));
  k.run();
  ASSERT_FALSE(rec.phases.empty());
  EXPECT_EQ(rec.phases.front(), Phase::Initialize);
  std::size_t i = 1;
  std::size_t cycles = 0;
  while (i < rec.phases.size()) {
    if (rec.phases[i] == Phase::TimedNotify) {
      ++i;
      continue;
    }
    ASSERT_LE(i + 3, rec.phases.size());
    EXPECT_EQ(rec.phases[i], Phase::Evaluate);
    EXPECT_EQ(rec.phases[i + 1], Phase::Update);
    EXPECT_EQ(rec.phases[i + 2], Phase::DeltaNotify);
    EXPECT_EQ(rec.times[i], rec.times[i + 2]);
    i += 3;
    ++cycles;
  }
  EXPECT_EQ(cycles, k.delta_count());
  for (std::size_t j = 1; j < rec.times.size(); ++j) EXPECT_LE(rec.times[j - 1], rec.times[j]);
}

// --- registration and initialization ------------------------------------

Process once(Kernel&, Log& log, std::string name) {
  log.add(name);
  co_return;
}

TEST(Kernel, InitializationRunsProcessesInRegistrationOrder) {
  Kernel k;
  Log log{&k, {}};
  k.spawn_thread("p0", once(k, log, "p0"));
  k.spawn_thread("p1", once(k, log, "p1"));
  EXPECT_EQ(k.run(), ExitReason::NoMoreWork);
  EXPECT_EQ(log.lines, (std::vector<std::string>{"p0@0/0", "p1@0/0"}));
  EXPECT_EQ(k.status(0), ProcessStatus::Terminated);
}

TEST(Kernel, DontInitializeWaitsForFirstTrigger) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("go");
  k.spawn_thread("lazy", once(k, log, "lazy"), ProcessOptions{.dont_initialize = true, .sensitivity = {e}});
  k.notify(e, SimTime{7});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"lazy@7/0"}));
}

TEST(Kernel, EmptySystemEndsAtTimeZero) {
  Kernel k;
  EXPECT_EQ(k.run(), ExitReason::NoMoreWork);
  EXPECT_EQ(k.now().ticks(), 0u);
}

TEST(Kernel, RegistrationAfterStartIsRejected) {
  Kernel k;
  Log log{&k, {}};
  k.run();
  EXPECT_THROW(k.spawn_thread("late", once(k, log, "late")), KernelError);
}

// --- notification overriding and cancel ---------------------------------

Process wait_and_log(Kernel& k, Log& log, EventId e, std::string name) {
  for (;;) {
    co_await k.wait(e);
    log.add(name);
  }
}

TEST(Kernel, CancelledTimedNotificationNeverFires) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("e");
  k.spawn_thread("B", wait_and_log(k, log, e, "B"));
  k.notify(e, SimTime{5});
  k.cancel(e);
  k.cancel(e);
  EXPECT_EQ(k.pending(e).kind, EventPending::Kind::None);
  EXPECT_EQ(k.run(), ExitReason::NoMoreWork);
  EXPECT_TRUE(log.lines.empty());
}

Process notify_then_cancel(Kernel& k, EventId e) {
  k.notify(e);
  k.cancel(e);
  co_return;
}

TEST(Kernel, CancelAfterImmediateNotifyIsTooLate) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("e");
  k.spawn_thread("B", wait_and_log(k, log, e, "B"));
  k.spawn_thread("A", notify_then_cancel(k, e));
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"B@0/0"}));
}

Process conflicting_notifier(Kernel& k, EventId e, std::vector<EventPending>& seen) {
  co_await k.wait(SimTime{1});
  k.notify(e, SimTime{20});
  k.notify(e, SimTime{8});
  seen.push_back(k.pending(e));
  k.notify(e, SimTime{30});
  seen.push_back(k.pending(e));
  k.notify_delta(e);
  k.notify(e, SimTime{3});
  seen.push_back(k.pending(e));
}

TEST(Kernel, EarlierNotificationWins) {
  Kernel k;
  Log log{&k, {}};
  std::vector<EventPending> seen;
  const EventId e = k.create_event("e");
  k.spawn_thread("B", wait_and_log(k, log, e, "B"));
  k.spawn_thread("A", conflicting_notifier(k, e, seen));
  k.run();
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0].at.ticks(), 9u);
  EXPECT_EQ(seen[1].at.ticks(), 9u);
  EXPECT_EQ(seen[2].kind, EventPending::Kind::Delta);
  // Only the delta notification survives.
  EXPECT_EQ(log.lines, (std::vector<std::string>{"B@1/2"}));
}

TEST(Kernel, EqualDeadlinesFireInInsertionOrder) {
  Kernel k;
  Log log{&k, {}};
  const EventId e1 = k.create_event("e1");
  const EventId e2 = k.create_event("e2");
  k.spawn_thread("B1", wait_and_log(k, log, e1, "B1"));
  k.spawn_thread("B2", wait_and_log(k, log, e2, "B2"));
  k.notify(e2, SimTime{4});
  k.notify(e1, SimTime{4});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"B2@4/1", "B1@4/1"}));
}

TEST(Kernel, ZeroDelayIsDelta) {
  Kernel k;
  const EventId e = k.create_event("e");
  k.notify(e, SimTime{0});
  EXPECT_EQ(k.pending(e).kind, EventPending::Kind::Delta);
}

// --- signal channel -------------------------------------------------------

Process double_writer(Kernel& k, Signal<int>& s) {
  s.write(1);
  s.write(2);
  co_await k.wait(SimTime{5});
  s.write(2);
}

Process signal_watcher(Kernel& k, Log& log, Signal<int>& s) {
  for (;;) {
    co_await k.wait(s.value_changed_event());
    log.add("changed=" + std::to_string(s.read()));
  }
}

TEST(Signal, LastWriteWinsAndUnchangedValueIsSilent) {
  Kernel k;
  Log log{&k, {}};
  Signal<int> s(k, "s", 0);
  k.spawn_thread("w", double_writer(k, s));
  k.spawn_thread("r", signal_watcher(k, log, s));
  k.run();
  EXPECT_EQ(s.read(), 2);
  EXPECT_EQ(log.lines, (std::vector<std::string>{"changed=2@0/1"}));
}

// --- compound waits ------------------------------------------------------

Process any_waiter(Kernel& k, Log& log, EventId a, EventId b) {
  co_await k.wait_any({a, b});
  log.add("any");
}

Process all_waiter(Kernel& k, Log& log, EventId a, EventId b) {
  co_await k.wait_all({a, b});
  log.add("all");
}

Process timeout_waiter(Kernel& k, Log& log, EventId e, std::uint64_t timeout) {
  const bool timed_out = co_await k.wait(SimTime{timeout}, e);
  log.add(timed_out ? "timeout" : "event");
}

TEST(Kernel, WaitAnyAndWaitAll) {
  Kernel k;
  Log log{&k, {}};
  const EventId a = k.create_event("a");
  const EventId b = k.create_event("b");
  k.spawn_thread("any", any_waiter(k, log, a, b));
  k.spawn_thread("all", all_waiter(k, log, a, b));
  k.notify(a, SimTime{3});
  k.notify(b, SimTime{9});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"any@3/1", "all@9/2"}));
}

TEST(Kernel, WaitWithTimeoutResolvesOnWhicheverComesFirst) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("e");
  const EventId never = k.create_event("never");
  k.spawn_thread("t1", timeout_waiter(k, log, e, 10));
  k.spawn_thread("t2", timeout_waiter(k, log, never, 4));
  k.notify(e, SimTime{6});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"timeout@4/1", "event@6/2"}));
  // The first process's timeout was cancelled, so the clock stops at 6.
  EXPECT_EQ(k.now().ticks(), 6u);
}

TEST(Kernel, StaticSensitivityIgnoredDuringDynamicWait) {
  Kernel k;
  Log log{&k, {}};
  const EventId s = k.create_event("static");
  const EventId d = k.create_event("dynamic");
  k.spawn_thread("p", wait_and_log(k, log, d, "p"), ProcessOptions{.sensitivity = {s}});
  k.notify(s, SimTime{2});
  k.notify(d, SimTime{5});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"p@5/1"}));
}

// --- methods, runaway, run limits ---------------------------------------

TEST(Kernel, MethodProcessRetriggersOnSensitivity) {
  Kernel k;
  Log log{&k, {}};
  const EventId e = k.create_event("e");
  k.spawn_method("m", [&] { log.add("m"); }, ProcessOptions{.sensitivity = {e}});
  k.notify(e, SimTime{3});
  k.run();
  EXPECT_EQ(log.lines, (std::vector<std::string>{"m@0/0", "m@3/1"}));
}

Process spinner(Kernel& k) {
  for (;;) k.step();
  co_return;
}

TEST(Kernel, RunawayProcessIsReported) {
  Kernel k(KernelOptions{.step_budget = 1000});
  k.spawn_thread("spin", spinner(k));
  EXPECT_THROW(k.run(), RunawayProcess);
}

Process ticker(Kernel& k, std::uint64_t period) {
  for (;;) co_await k.wait(SimTime{period});
}

TEST(Kernel, RunUntilStopsWithTimeExhausted) {
  Kernel k;
  k.spawn_thread("tick", ticker(k, 7));
  EXPECT_EQ(k.run(SimTime{5000}), ExitReason::TimeExhausted);
  EXPECT_EQ(k.now().ticks(), 5000u);
}

TEST(Kernel, ObserverCanStopAtTimeZero) {
  Kernel k;
  PhaseRecorder rec;
  rec.now_source = &k;
  rec.stop_after = 1;
  k.add_observer(&rec);
  k.spawn_thread("tick", ticker(k, 7));
  EXPECT_EQ(k.run(), ExitReason::ObserverStop);
  EXPECT_EQ(k.now().ticks(), 0u);
}

Process failing(Kernel& k) {
  co_await k.wait(SimTime{1});
  throw std::runtime_error("model failure");
}

TEST(Kernel, ProcessExceptionsPropagate) {
  Kernel k;
  k.spawn_thread("bad", failing(k));
  EXPECT_THROW(k.run(), std::runtime_error);
}

Process chatty(Kernel& k, Log& log, std::string name) {
  for (int i = 0; i < 3; ++i) {
    log.add(name);
    co_await k.wait(SimTime{1});
  }
}

TEST(Kernel, ShuffledInitializationIsSeededAndReproducible) {
  auto run_with = [](std::optional<std::uint64_t> seed) {
    Kernel k(KernelOptions{.shuffle_seed = seed});
    Log log{&k, {}};
    for (int i = 0; i < 6; ++i) k.spawn_thread("p" + std::to_string(i), chatty(k, log, "p" + std::to_string(i)));
    k.run();
    return log.lines;
  };
  EXPECT_EQ(run_with(11), run_with(11));
  EXPECT_EQ(run_with(std::nullopt), run_with(std::nullopt));
  bool any_differs = false;
  for (std::uint64_t s = 1; s < 20 && !any_differs; ++s) any_differs = run_with(s) != run_with(std::nullopt);
  EXPECT_TRUE(any_differs);
}

TEST(Kernel, WaitOutsideProcessIsAnError) {
  Kernel k;
  const EventId e = k.create_event("e");
  auto aw = k.wait(e);
  EXPECT_THROW(aw.await_suspend(std::noop_coroutine()), KernelError);
}

}  // namespace
