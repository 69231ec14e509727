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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ext/stdio_filebuf.h>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bltl_oracle.hpp"
#include "scsmc/bltl/evaluator.hpp"
#include "scsmc/cli/runner.hpp"
#include "scsmc/kernel/kernel.hpp"
#include "scsmc/smc/parallel.hpp"
#include "scsmc/smc/smc.hpp"
#include "scsmc/stochastic/rng.hpp"

namespace {

using namespace scsmc;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Report {
  int failures = 0;
  void line(int id, bool ok, const std::string& what, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << what << " | " << detail << std::endl;
    if (!ok) ++failures;
  }
  void info(const std::string& text) { std::cout << "INFO " << text << std::endl; }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Estimates every query of `cfg` on n shared traces; returns the success
// fraction for formulas and the mean for reward queries.
std::vector<double> shared_estimates(const cli::Config& cfg, std::uint64_t n) {
  const cli::TraceFactory factory(cfg);
  const auto outcomes = smc::parallel_map<std::vector<cli::Outcome>>(
      0, n, workers(), [&](std::uint64_t i) { return factory.sample(i); });
  std::vector<double> sums(factory.queries().size(), 0.0);
  for (const auto& row : outcomes) {
    for (std::size_t q = 0; q < row.size(); ++q) {
      sums[q] += std::holds_alternative<bool>(row[q]) ? (std::get<bool>(row[q]) ? 1.0 : 0.0) : std::get<double>(row[q]);
    }
  }
  for (double& s : sums) s /= static_cast<double>(n);
  return sums;
}

// --- 1 ------------------------------------------------------------------------

void table1(Report& r) {
  const std::uint64_t n = smc::chernoff_n(0.02, 0.02);
  struct Cell {
    double p1, p2;
    std::function<bool(double)> ok;
    std::string expect;
  };
  const std::vector<Cell> cells = {
      {0.6, 0.3, [](double v) { return v <= 0.02; }, "<= 0.02"},
      {0.9, 0.3, [](double v) { return v <= 0.02; }, "<= 0.02"},
      {0.6, 0.6, [](double v) { return std::abs(v - 0.0194) <= 0.04; }, "0.0194 +- 0.04"},
      {0.9, 0.6, [](double v) { return std::abs(v - 0.0835) <= 0.04; }, "0.0835 +- 0.04"},
      {0.6, 0.9, [](double v) { return std::abs(v - 0.0720) <= 0.04; }, "0.0720 +- 0.04"},
      {0.9, 0.9, [](double v) { return v >= 0.96; }, ">= 0.96"},
  };
  bool all = true;
  std::string detail;
  std::string strict;
  for (const auto& c : cells) {
    cli::Config cfg;
    cfg.model = "fifo";
    cfg.seed = 1;
    cfg.params = {{"p1", fmt(c.p1, 1)}, {"p2", fmt(c.p2, 1)}};
    cfg.formulas = {"G<=5000((c_read = '&') => (F<=25 (c_read = '@')))",
                    "G<=5000((c_read = '&') => (F<=24 (c_read = '@')))"};
    const auto est = shared_estimates(cfg, n);
    const bool ok = c.ok(est[0]);
    all = all && ok;
    detail += "(" + fmt(c.p1, 1) + "," + fmt(c.p2, 1) + ")=" + fmt(est[0]) + (ok ? "" : "[want " + c.expect + "]") + " ";
    strict += "(" + fmt(c.p1, 1) + "," + fmt(c.p2, 1) + ")=" + fmt(est[0 + 1]) + " ";
  }
  r.line(1, all, "FIFO latency table at n=" + std::to_string(n), detail);
  r.info("FIFO latency table with the bound read as strictly below 25 ns (F<=24): " + strict);
}

// --- 2 ------------------------------------------------------------------------

void latency_curve(Report& r) {
  const std::uint64_t n = smc::chernoff_n(0.05, 0.05);
  cli::Config cfg;
  cfg.params = {{"p1", "0.9"}, {"p2", "0.9"}};
  for (int t1 = 12; t1 <= 25; ++t1) {
    cfg.formulas.push_back("G<=10000((c_read = '&') => (F<=" + std::to_string(t1) + " (c_read = '@')))");
  }
  const auto est = shared_estimates(cfg, n);
  bool monotone = true;
  std::string detail;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (i > 0 && est[i] + 0.03 < est[i - 1]) monotone = false;
    detail += std::to_string(12 + i) + ":" + fmt(est[i], 3) + " ";
  }
  const double at18 = est[18 - 12];
  r.line(2, monotone && at18 >= 0.95, "latency curve monotone and >= 0.95 at T1=18 (n=" + std::to_string(n) + ")",
         detail);
}

// --- 3 ------------------------------------------------------------------------

void hoeffding(Report& r) {
  const auto a = smc::chernoff_n(0.02, 0.02);
  const auto b = smc::chernoff_n(0.1, 0.05);
  r.line(3, a == 5757 && b == 185, "Hoeffding sample sizes",
         "chernoff_n(0.02,0.02)=" + std::to_string(a) + " chernoff_n(0.1,0.05)=" + std::to_string(b));
}

// --- 4 ------------------------------------------------------------------------

void oracle_equivalence(Report& r) {
  oracle::Generator gen(20240601);
  int mismatches = 0;
  int duality = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto w = gen.trace();
    const auto raw = gen.formula(gen.pick(0, 4));
    const auto f = bltl::bind(raw, *w.schema, 1);
    if (bltl::evaluate(w, f) != oracle::holds(w, f, 0)) ++mismatches;
    const auto b = gen.bound();
    const auto g = bltl::bind(bltl::make_globally(b, raw), *w.schema, 1);
    const auto nfn = bltl::bind(bltl::make_not(bltl::make_eventually(b, bltl::make_not(raw))), *w.schema, 1);
    const auto ev = bltl::bind(bltl::make_eventually(b, raw), *w.schema, 1);
    const auto tu = bltl::bind(bltl::make_until(b, bltl::make_true(), raw), *w.schema, 1);
    if (bltl::evaluate(w, g) != bltl::evaluate(w, nfn)) ++duality;
    if (bltl::evaluate(w, ev) != bltl::evaluate(w, tu)) ++duality;
  }
  r.line(4, mismatches == 0 && duality == 0, "BLTL oracle equivalence on 1000 pairs",
         "mismatches=" + std::to_string(mismatches) + " duality violations=" + std::to_string(duality));
}

// --- 5 ------------------------------------------------------------------------

struct GoldenLog {
  kernel::Kernel* k;
  std::vector<std::string> lines;
  void add(const std::string& s) {
    lines.push_back(s + "@" + std::to_string(k->now().ticks()) + "/" + std::to_string(k->delta_count()));
  }
};

struct PhaseLog : kernel::KernelObserver {
  std::vector<kernel::Phase> phases;
  void on_phase_end(kernel::Phase p) override { phases.push_back(p); }
};

kernel::Process golden_a(kernel::Kernel& k, GoldenLog& log, kernel::EventId e, int mode) {
  co_await k.wait(kernel::SimTime{10});
  log.add("A:notify");
  if (mode == 0) k.notify(e);
  if (mode == 1) k.notify_delta(e);
  if (mode == 2) k.notify(e, kernel::SimTime{5});
  log.add("A:after");
}

kernel::Process golden_b(kernel::Kernel& k, GoldenLog& log, kernel::EventId e) {
  co_await k.wait(e);
  log.add("B:woke");
}

void kernel_golden(Report& r) {
  const std::vector<std::vector<std::string>> expected = {
      {"A:notify@10/1", "A:after@10/1", "B:woke@10/1"},
      {"A:notify@10/1", "A:after@10/1", "B:woke@10/2"},
      {"A:notify@10/1", "A:after@10/1", "B:woke@15/2"},
  };
  const char* names[] = {"immediate", "delta", "timed"};
  bool all = true;
  std::string detail;
  for (int mode = 0; mode < 3; ++mode) {
    kernel::Kernel k;
    GoldenLog log{&k, {}};
    PhaseLog phases;
    k.add_observer(&phases);
    const auto e = k.create_event("e");
    k.spawn_thread("A", golden_a(k, log, e, mode));
    k.spawn_thread("B", golden_b(k, log, e));
    k.run();
    bool order = !phases.phases.empty() && phases.phases[0] == kernel::Phase::Initialize;
    std::size_t i = 1;
    while (order && i < phases.phases.size()) {
      if (phases.phases[i] == kernel::Phase::TimedNotify) {
        ++i;
        continue;
      }
      order = i + 2 < phases.phases.size() && phases.phases[i] == kernel::Phase::Evaluate &&
              phases.phases[i + 1] == kernel::Phase::Update && phases.phases[i + 2] == kernel::Phase::DeltaNotify;
      i += 3;
    }
    const bool ok = log.lines == expected[mode] && order;
    all = all && ok;
    detail += std::string(names[mode]) + "=" + (ok ? "ok" : "mismatch") + " ";
  }
  r.line(5, all, "kernel golden scenarios and phase order", detail);
}

// --- 6 ------------------------------------------------------------------------

void sprt_strength(Report& r) {
  const smc::TestParams t{.theta = 0.5, .delta = 0.1, .alpha = 0.01, .beta = 0.01};
  std::string detail;
  bool ok = true;
  for (double p : {t.p0() + 0.05, t.p1() - 0.05}) {
    int wrong = 0;
    for (std::uint64_t run = 0; run < 500; ++run) {
      const auto v = smc::sprt(
          [p, run](std::uint64_t i) {
            stochastic::RngStream s(900'000 + run, i);
            return stochastic::bernoulli(s, p) == 1;
          },
          t);
      const auto right = p > t.theta ? smc::Decision::H0Accepted : smc::Decision::H1Accepted;
      wrong += v.decision != right;
    }
    ok = ok && wrong / 500.0 <= 0.03;
    detail += "p=" + fmt(p, 2) + " wrong=" + fmt(wrong / 500.0, 3) + " ";
  }
  const auto succ = smc::sprt([](std::uint64_t) { return true; }, t);
  const auto fail = smc::sprt([](std::uint64_t) { return false; }, t);
  const bool stops = succ.samples_used == 12 && fail.samples_used == 10;
  detail += "all-success stops at " + std::to_string(succ.samples_used) + " (want 12), all-failure stops at " +
            std::to_string(fail.samples_used) + " (want 10)";
  r.line(6, ok && stops, "SPRT strength and stopping points", detail);
}

// --- 7 ------------------------------------------------------------------------

void ecs_invariants(Report& r) {
  constexpr std::uint64_t n = 200;
  const std::string horizon = "86400";  // 30 days of 30 s units
  cli::Config cfg;
  cfg.model = "ecs";
  cfg.seed = 1;
  for (int i = 1; i <= 4; ++i) cfg.formulas.push_back("(!shutdown) U<=" + horizon + " failure_" + std::to_string(i));
  for (int i = 1; i <= 4; ++i) cfg.formulas.push_back("F<=" + horizon + " failure_" + std::to_string(i));
  for (const char* v : {"reward_up", "reward_danger", "reward_shutdown", "reboots_i", "reboots_o"}) {
    cfg.formulas.push_back("X<=" + horizon + " " + std::string(v));
  }
  const cli::TraceFactory factory(cfg);
  const auto rows = smc::parallel_map<std::vector<cli::Outcome>>(
      0, n, workers(), [&](std::uint64_t i) { return factory.sample(i); });

  // (a) exact conservation on the integer tick counters of every trace.
  const kernel::SimTime until{86400ULL * 30000ULL};
  const auto conserved = smc::parallel_map<bool>(0, n, workers(), [&](std::uint64_t i) {
    cli::TraceRun run = factory.make(i, until);
    run.kernel->run(until);
    auto read = [&](const char* path) { return run.model->attribute(path)->read(); };
    return read("reward_up") + read("reward_danger") + read("reward_shutdown") == read("elapsed") &&
           read("elapsed") == static_cast<std::int64_t>(until.ticks());
  });
  const auto conserved_count = std::count(conserved.begin(), conserved.end(), true);

  std::vector<double> mean(rows[0].size(), 0.0);
  std::vector<double> diff;  // reboots_o - reboots_i per trace
  for (const auto& row : rows) {
    for (std::size_t q = 0; q < row.size(); ++q) {
      mean[q] += std::holds_alternative<bool>(row[q]) ? std::get<bool>(row[q]) : std::get<double>(row[q]);
    }
    diff.push_back(std::get<double>(row[12]) - std::get<double>(row[11]));
  }
  for (double& m : mean) m /= static_cast<double>(n);

  const bool a = conserved_count == static_cast<long>(n);
  const bool b = mean[0] > mean[1] && mean[0] > mean[2] && mean[0] > mean[3];
  const double f1 = mean[4], f2 = mean[5], f3 = mean[6], f4 = mean[7];
  const bool c = f1 >= 0.9 && f3 >= 0.9 && std::abs(f1 - f3) <= 0.1 && f4 < f1 && f4 < f2 && f4 < f3;
  double dm = 0, dv = 0;
  for (double d : diff) dm += d;
  dm /= static_cast<double>(n);
  for (double d : diff) dv += (d - dm) * (d - dm);
  const double se = std::sqrt(dv / static_cast<double>(n - 1) / static_cast<double>(n));
  const bool d = std::abs(dm) <= 3 * se + 1e-12;
  const double danger_days = mean[9] / 2880.0;
  const bool e = danger_days < 0.1;

  const auto days = [](double units) { return fmt(units / 2880.0, 4); };
  r.line(7, a && b && c && d && e, "ECS invariants over 200 traces of 30 days",
         std::string("(a) conservation ") + std::to_string(conserved_count) + "/" + std::to_string(n) + (a ? " ok" : " FAIL") +
             "; (b) first failure sensors=" + fmt(mean[0], 3) + " actuators=" + fmt(mean[1], 3) +
             " skipped=" + fmt(mean[2], 3) + " main=" + fmt(mean[3], 3) + (b ? " ok" : " FAIL") +
             "; (c) F<=30d f1=" + fmt(f1, 3) + " f2=" + fmt(f2, 3) + " f3=" + fmt(f3, 3) + " f4=" + fmt(f4, 3) +
             (c ? " ok" : " FAIL") + "; (d) E[ro-ri]=" + fmt(dm, 3) + " 3se=" + fmt(3 * se, 3) +
             " E[ri]=" + fmt(mean[11], 3) + " E[ro]=" + fmt(mean[12], 3) + (d ? " ok" : " FAIL") +
             "; (e) E[danger]=" + days(mean[9]) + " d" + (e ? " ok" : " FAIL") + " (up " + days(mean[8]) +
             " d, shutdown " + days(mean[10]) + " d, processors-only classification)");
}

// --- 8 ------------------------------------------------------------------------

std::string capture(const std::string& args, int* exit_code = nullptr) {
  const std::string cmd = std::string(SCSMC_TOOL) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  if (!pipe) return out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  if (exit_code) *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void determinism(Report& r) {
  const std::string check =
      "check -f 'G<=5000((c_read = 38) => (F<=25 (c_read = 64)))' --samples 300 --workers 1 --seed 42";
  const std::string emit = "trace --emit --count 3 --seed 7 --until 200";
  int e1 = -1, e2 = -1;
  const auto c1 = capture(check, &e1);
  const auto c2 = capture(check, &e2);
  const auto t1 = capture(emit);
  const auto t2 = capture(emit);
  const bool ok = e1 == 0 && e2 == 0 && !c1.empty() && c1 == c2 && !t1.empty() && t1 == t2;
  r.line(8, ok, "byte-identical check and trace --emit reruns",
         "check " + std::to_string(c1.size()) + " bytes " + (c1 == c2 ? "identical" : "DIFFER") + ", emit " +
             std::to_string(t1.size()) + " bytes " + (t1 == t2 ? "identical" : "DIFFER"));
}

// --- 9 ------------------------------------------------------------------------

// Runs `trace --serve` as a child process and consumes its protocol stream.
std::vector<cli::Outcome> loopback(const cli::Config& cfg, const std::vector<std::string>& args) {
  int to_child[2], from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) throw std::runtime_error("pipe failed");
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(SCSMC_TOOL));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(SCSMC_TOOL, argv.data());
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  std::vector<cli::Outcome> result;
  {
    __gnu_cxx::stdio_filebuf<char> out_buf(to_child[1], std::ios::out);
    __gnu_cxx::stdio_filebuf<char> in_buf(from_child[0], std::ios::in);
    std::ostream out(&out_buf);
    std::istream in(&in_buf);
    result = cli::consume_trace(cfg, in, out);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  return result;
}

void stdio_loopback(Report& r) {
  cli::Config cfg;
  cfg.model = "fifo";
  cfg.seed = 2024;
  cfg.params = {{"p1", "0.9"}, {"p2", "0.6"}};
  cfg.formulas = {"G<=300((c_read = '&') => (F<=25 (c_read = '@')))"};
  const cli::TraceFactory factory(cfg);
  int agree = 0;
  int true_count = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto direct = factory.sample(i);
    const auto piped = loopback(cfg, {"trace", "--serve", "--index", std::to_string(i), "--seed", "2024", "--set",
                                      "p1=0.9", "--set", "p2=0.6", "-f", cfg.formulas[0]});
    agree += direct == piped;
    true_count += std::get<bool>(direct[0]);
  }
  r.line(9, agree == 50, "stdio loopback verdicts equal in-process verdicts",
         std::to_string(agree) + "/50 agree (" + std::to_string(true_count) + " true)");
}

}  // namespace

int main() {
  Report r;
  const auto start = std::chrono::steady_clock::now();
  auto timed = [&](const char* name, void (*fn)(Report&)) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(r);
    } catch (const std::exception& e) {
      std::cout << "FAIL " << name << ": exception: " << e.what() << std::endl;
      ++r.failures;
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.info(std::string(name) + " took " + fmt(s, 1) + " s");
  };
  timed("criterion 1", table1);
  timed("criterion 2", latency_curve);
  timed("criterion 3", hoeffding);
  timed("criterion 4", oracle_equivalence);
  timed("criterion 5", kernel_golden);
  timed("criterion 6", sprt_strength);
  timed("criterion 7", ecs_invariants);
  timed("criterion 8", determinism);
  timed("criterion 9", stdio_loopback);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (r.failures == 0 ? "ALL CRITERIA PASS" : std::to_string(r.failures) + " CRITERIA FAIL") << " ("
            << fmt(total, 1) << " s)" << std::endl;
  return r.failures == 0 ? 0 : 1;
}
