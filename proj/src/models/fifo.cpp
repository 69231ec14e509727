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

#include "scsmc/models/fifo.hpp"

#include <stdexcept>

namespace scsmc::models {

void FifoConfig::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("p1 must lie in [0,1]");
  if (!(p2 >= 0.0 && p2 <= 1.0)) throw std::invalid_argument("p2 must lie in [0,1]");
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
  if (message.empty()) throw std::invalid_argument("message must not be empty");
  if (step == kernel::SimTime::zero()) throw std::invalid_argument("step must be at least one tick");
}

FifoModel::FifoModel(kernel::Kernel& kernel, FifoConfig config, stochastic::RngStream stream)
    : kernel_(kernel), config_(std::move(config)), rng_(stream) {
  config_.validate();
  data_.assign(config_.capacity, '\0');
  write_event_ = kernel_.create_event("write_event");
  read_event_ = kernel_.create_event("read_event");
  kernel_.spawn_thread("producer", producer());
  kernel_.spawn_thread("consumer", consumer());
}

kernel::Task<> FifoModel::fifo_write(char c) {
  if (num_elements_ == config_.capacity) co_await kernel_.wait(read_event_);
  data_[(first_ + num_elements_) % config_.capacity] = c;
  ++num_elements_;
  kernel_.notify_delta(write_event_);
}

kernel::Task<char> FifoModel::fifo_read() {
  if (num_elements_ == 0) co_await kernel_.wait(write_event_);
  const char c = data_[first_];
  --num_elements_;
  first_ = (first_ + 1) % config_.capacity;
  kernel_.notify_delta(read_event_);
  co_return c;
}

kernel::Process FifoModel::producer() {
  std::size_t next = 0;
  for (;;) {
    if (stochastic::bernoulli(rng_, config_.p1)) {
      const char c = config_.message[next];
      probes_.hit("send_start");
      co_await fifo_write(c);
      c_write_ = static_cast<unsigned char>(c);
      produced_.push_back(c);
      probes_.hit("send_end");
      next = (next + 1) % config_.message.size();
    }
    co_await kernel_.wait(config_.step);
  }
}

kernel::Process FifoModel::consumer() {
  for (;;) {
    if (stochastic::bernoulli(rng_, config_.p2)) {
      const char c = co_await fifo_read();
      c_read_ = static_cast<unsigned char>(c);
      consumed_.push_back(c);
      probes_.hit("receive_end");
    }
    co_await kernel_.wait(config_.step);
  }
}

std::optional<monitor::Attribute> FifoModel::attribute(std::string_view path) const {
  if (path == "c_read" || path == "pnt_con->c_int") return monitor::Attribute{[this] { return std::int64_t{c_read_}; }};
  if (path == "c_write" || path == "pnt_pro->c_int") return monitor::Attribute{[this] { return std::int64_t{c_write_}; }};
  if (path == "n_elements" || path == "fifo.num_elements") {
    return monitor::Attribute{[this] { return static_cast<std::int64_t>(num_elements_); }};
  }
  if (path == "first" || path == "fifo.first") return monitor::Attribute{[this] { return static_cast<std::int64_t>(first_); }};
  return std::nullopt;
}

std::vector<std::string> FifoModel::attribute_paths() const {
  return {"c_read", "c_write", "n_elements", "first", "pnt_con->c_int", "pnt_pro->c_int", "fifo.num_elements", "fifo.first"};
}

std::unique_ptr<FifoModel> build_fifo(kernel::Kernel& kernel, const FifoConfig& config, stochastic::RngStream stream) {
  return std::make_unique<FifoModel>(kernel, config, stream);
}

}  // namespace scsmc::models
