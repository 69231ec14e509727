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

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace scsmc::smc {

/// A sampler failed; `completed` samples had finished before the failure.
class SamplerError : public std::runtime_error {
 public:
  SamplerError(const std::string& what, std::uint64_t completed, std::uint64_t index)
      : std::runtime_error("sample " + std::to_string(index) + " failed after " + std::to_string(completed) +
                           " completed samples: " + what),
        completed_(completed),
        index_(index) {}
  std::uint64_t completed() const { return completed_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t completed_;
  std::uint64_t index_;
};

/// Evaluates fn(first), ..., fn(first + count - 1) on up to `workers`
/// threads. Results are stored by index, so the output does not depend on
/// scheduling.
template <typename T>
std::vector<T> parallel_map(std::uint64_t first, std::uint64_t count, unsigned workers,
                            const std::function<T(std::uint64_t)>& fn) {
  std::vector<std::optional<T>> slots(count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::uint64_t error_index = 0;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i].emplace(fn(first + i));
        done.fetch_add(1);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
          error_index = first + i;
        }
        failed = true;
      }
    }
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(1, count))));
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (error) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw SamplerError(what, done.load(), error_index);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace scsmc::smc
