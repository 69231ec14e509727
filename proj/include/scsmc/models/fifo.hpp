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
#include <memory>
#include <string>
#include <vector>

#include "scsmc/kernel/kernel.hpp"
#include "scsmc/monitor/monitor.hpp"
#include "scsmc/stochastic/rng.hpp"

namespace scsmc::models {

struct FifoConfig {
  double p1 = 0.9;  // producer write probability per step
  double p2 = 0.9;  // consumer read probability per step
  std::size_t capacity = 10;
  std::string message = "&abcdefgh@";
  /// Period of both processes, in kernel ticks.
  kernel::SimTime step{1};

  void validate() const;
};

/// Producer and consumer thread processes joined by a bounded blocking
/// FIFO of characters. Both processes draw from one shared random stream.
///
/// Attributes: c_read, c_write, n_elements, first (plus the aliases
/// pnt_con->c_int, pnt_pro->c_int, fifo.num_elements, fifo.first).
/// Events: write_event, read_event. Probe labels: send_start (before each
/// write), send_end (after it), receive_end (after each read).
class FifoModel : public monitor::Observable {
 public:
  FifoModel(kernel::Kernel& kernel, FifoConfig config, stochastic::RngStream stream);

  std::optional<monitor::Attribute> attribute(std::string_view path) const override;
  std::vector<std::string> attribute_paths() const override;
  monitor::ProbeHub& probes() override { return probes_; }
  kernel::SimTime time_unit() const override { return config_.step; }

  const FifoConfig& config() const { return config_; }
  int c_read() const { return c_read_; }
  int c_write() const { return c_write_; }
  std::size_t num_elements() const { return num_elements_; }
  std::size_t first() const { return first_; }
  kernel::EventId write_event() const { return write_event_; }
  kernel::EventId read_event() const { return read_event_; }

  /// Every character the consumer has read, in order.
  const std::string& consumed() const { return consumed_; }
  /// Every character the producer has written, in order.
  const std::string& produced() const { return produced_; }

  kernel::Task<> fifo_write(char c);
  kernel::Task<char> fifo_read();

 private:
  kernel::Process producer();
  kernel::Process consumer();

  kernel::Kernel& kernel_;
  FifoConfig config_;
  stochastic::RngStream rng_;
  monitor::ProbeHub probes_;

  std::vector<char> data_;
  std::size_t num_elements_ = 0;
  std::size_t first_ = 0;
  int c_read_ = -1;
  int c_write_ = -1;
  kernel::EventId write_event_;
  kernel::EventId read_event_;
  std::string consumed_;
  std::string produced_;
};

std::unique_ptr<FifoModel> build_fifo(kernel::Kernel& kernel, const FifoConfig& config, stochastic::RngStream stream);

}  // namespace scsmc::models
