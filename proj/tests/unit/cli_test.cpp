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
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scsmc/cli/experiments.hpp"
#include "scsmc/cli/runner.hpp"

namespace {

using namespace scsmc::cli;

struct Result {
  int exit_code;
  std::string out;
};

Result run_shell(const std::string& cmd);

Result run_tool(const std::string& args) { return run_shell(std::string(SCSMC_TOOL) + " " + args + " 2>/dev/null"); }

Result run_shell(const std::string& cmd) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::string kLatency = "'G<=5000((c_read = 38) => (F<=25 (c_read = 64)))'";

TEST(CliCheck, TautologyEstimatesOne) {
  const auto r = run_tool("check --model fifo -f true --samples 50");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("RESULT algorithm=chernoff value=1 "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("n=50 successes=50"), std::string::npos) << r.out;
}

TEST(CliCheck, SlowConsumerFailsLatency) {
  const auto r = run_tool("check --model fifo -f " + kLatency + " --set p2=0.3 --samples 200");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("value=0 "), std::string::npos) << r.out;
}

TEST(CliCheck, HypothesisTestExitCodes) {
  EXPECT_EQ(run_tool("check -f true --algorithm sprt --theta 0.5 --delta 0.1 --alpha 0.01 --beta 0.01").exit_code, 0);
  EXPECT_EQ(run_tool("check -f false --algorithm sprt --theta 0.5 --delta 0.1 --alpha 0.01 --beta 0.01").exit_code, 1);
  EXPECT_EQ(run_tool("check -f true --algorithm sprt --theta 0.5 --delta 0.1 --alpha 0.01 --beta 0.01 --cap 3").exit_code,
            2);
  EXPECT_EQ(run_tool("check -f true --algorithm ssp --theta 0.5 --delta 0.1 --alpha 0.05 --beta 0.05").exit_code, 0);
  EXPECT_EQ(run_tool("check -f false --algorithm ssp --theta 0.5 --delta 0.1 --alpha 0.05 --beta 0.05").exit_code, 1);
}

TEST(CliCheck, ErrorsExitAboveTwo) {
  EXPECT_GT(run_tool("check -f 'G<=5 ('").exit_code, 2);
  EXPECT_GT(run_tool("check -f 'nosuchvar = 1'").exit_code, 2);
  EXPECT_GT(run_tool("check /nonexistent/config.txt").exit_code, 2);
  EXPECT_GT(run_tool("check -f true --set bogus=1").exit_code, 2);
  EXPECT_GT(run_tool("check -f true --delta 2").exit_code, 2);
  EXPECT_GT(run_tool("experiment table99").exit_code, 2);
}

TEST(CliCheck, ConfigFileWithFlagOverrides) {
  const auto path = std::filesystem::temp_directory_path() / "scsmc_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "model fifo\nformula false\nsamples 10\nplasma_run x\n";
  }
  const auto from_file = run_tool("check " + path.string());
  EXPECT_EQ(from_file.exit_code, 0);
  EXPECT_NE(from_file.out.find("value=0 "), std::string::npos) << from_file.out;
  const auto overridden = run_tool("check " + path.string() + " -f true");
  EXPECT_NE(overridden.out.find("value=1 "), std::string::npos) << overridden.out;
  std::filesystem::remove(path);
}

TEST(CliDeterminism, CheckAndEmitAreByteIdentical) {
  const std::string check = "check -f " + kLatency + " --samples 100 --workers 1 --seed 11";
  const auto a = run_tool(check);
  const auto b = run_tool(check);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  const auto e1 = run_tool("trace --emit --count 2 --seed 7 --until 40");
  const auto e2 = run_tool("trace --emit --count 2 --seed 7 --until 40");
  EXPECT_EQ(e1.exit_code, 0);
  EXPECT_EQ(e1.out, e2.out);
  EXPECT_NE(e1.out.find("# trace 0 model fifo seed 7"), std::string::npos) << e1.out;
  EXPECT_NE(e1.out.find("# trace 1 "), std::string::npos);
}

TEST(CliDeterminism, WorkerCountDoesNotChangeEstimate) {
  const auto one = run_tool("check -f " + kLatency + " --samples 64 --workers 1 --seed 3");
  const auto four = run_tool("check -f " + kLatency + " --samples 64 --workers 4 --seed 3");
  auto result_line = [](const std::string& s) { return s.substr(s.find("RESULT"), s.find('\n', s.find("RESULT")) - s.find("RESULT")); };
  EXPECT_EQ(result_line(one.out), result_line(four.out));
}

TEST(CliTrace, EmitZeroIsEmpty) {
  const auto r = run_tool("trace --emit --count 0");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliTrace, ServeSpeaksTheProtocol) {
  const auto r = run_shell("printf 'NEXT\\nNEXT\\nNEXT\\nNEXT\\nNEXT\\n' | " + std::string(SCSMC_TOOL) +
                           " trace --serve --seed 7 --until 3 --attribute 'c_read c_read'"
                           " --attribute 'n_elements n_elements' 2>/dev/null");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.starts_with("STATE t=0 c_read=-1;n_elements=0\n")) << r.out;
  EXPECT_TRUE(r.out.ends_with("END\n")) << r.out;
}

TEST(TraceFactoryTest, OutcomesAreDeterministicPerIndex) {
  Config c;
  c.formulas = {"G<=5000((c_read = 38) => (F<=25 (c_read = 64)))", "X<=100 n_elements"};
  const TraceFactory f(c);
  ASSERT_EQ(f.queries().size(), 2u);
  EXPECT_EQ(f.schema()->names(), (std::vector<std::string>{"c_read", "n_elements"}));
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto a = f.sample(i);
    const auto b = f.sample(i);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(std::holds_alternative<bool>(a[0]));
    EXPECT_TRUE(std::holds_alternative<double>(a[1]));
    EXPECT_EQ(f.sample_one(0, i), a[0]);
  }
}

TEST(TraceFactoryTest, StdioConsumerMatchesInProcess) {
  Config c;
  c.formulas = {"G<=300((c_read = 38) => (F<=25 (c_read = 64)))"};
  c.seed = 4;
  const TraceFactory f(c);
  for (std::uint64_t i = 0; i < 5; ++i) {
    // Serve into a buffer with generous NEXT requests, then replay it.
    std::string requests;
    for (int k = 0; k < 400; ++k) requests += "NEXT\n";
    std::istringstream in(requests);
    std::ostringstream served;
    serve_trace(c, i, in, served);
    std::istringstream replies(served.str());
    std::ostringstream ignored;
    EXPECT_EQ(consume_trace(c, replies, ignored), f.sample(i)) << i;
  }
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string l;
  while (std::getline(is, l)) out.push_back(l);
  return out;
}

TEST(Experiments, CsvHeadersAndRowCounts) {
  Config base;
  base.samples = 4;
  struct Case {
    std::string name;
    std::string header;
    std::size_t rows;
    std::vector<double> grid;
  };
  const std::vector<Case> cases = {
      {"table1", "experiment,p1,p2,value,n,delta,alpha,seed,seconds", 6, {}},
      {"latency-curve", "experiment,T,T1,value,n,delta,alpha,seed,seconds", 2, {14, 18}},
      {"failure-first", "experiment,failure,T_days,value,n,delta,alpha,seed,seconds", 8, {0.5, 1}},
      {"eventual-failure", "experiment,failure,T_days,value,n,delta,alpha,seed,seconds", 4, {1}},
      {"rewards", "experiment,class,T_days,value,n,delta,alpha,seed,seconds", 3, {1}},
      {"reboots", "experiment,processor,T_days,value,n,delta,alpha,seed,seconds", 3, {1}},
      {"functional-groups", "experiment,group,T_days,value,n,delta,alpha,seed,seconds", 2, {1}},
  };
  ASSERT_EQ(experiment_names().size(), cases.size());
  for (const auto& c : cases) {
    std::ostringstream csv;
    ExperimentOptions opt;
    if (!c.grid.empty()) opt.grid = c.grid;
    run_experiment(c.name, base, csv, opt);
    const auto ls = lines(csv.str());
    ASSERT_FALSE(ls.empty()) << c.name;
    EXPECT_EQ(ls[0], c.header) << c.name;
    EXPECT_EQ(ls.size() - 1, c.rows) << c.name << "\n" << csv.str();
    for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_TRUE(ls[i].starts_with(c.name + ",")) << ls[i];
  }
  std::ostringstream sink;
  EXPECT_THROW(run_experiment("nope", base, sink), UnknownExperiment);
}

}  // namespace
