// distillkit/thread_pool.cpp

// Copyright 2026  DistillKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "distillkit/thread_pool.hpp"

#include <algorithm>

namespace distillkit {

int ThreadPool::default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ThreadPool::ThreadPool(int n_workers) {
  const int extra = std::max(0, n_workers - 1);
  threads_.reserve(static_cast<std::size_t>(extra));
  for (int i = 0; i < extra; ++i) threads_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    shutdown_ = true;
  }
  cv_work_.notify_all();
  for (auto& t : threads_) t.join();
}

void ThreadPool::worker_loop() {
  std::size_t seen_generation = 0;
  while (true) {
    std::unique_lock<std::mutex> lock(mu_);
    cv_work_.wait(lock, [&] { return shutdown_ || (fn_ != nullptr && generation_ != seen_generation); });
    if (shutdown_) return;
    seen_generation = generation_;
    const auto* fn = fn_;
    while (next_index_ < total_) {
      const std::size_t i = next_index_++;
      lock.unlock();
      try {
        (*fn)(i);
      } catch (...) {
        lock.lock();
        if (!first_error_) first_error_ = std::current_exception();
        ++done_;
        continue;
      }
      lock.lock();
      ++done_;
    }
    if (done_ == total_) cv_done_.notify_all();
  }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  if (threads_.empty()) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    fn_ = &fn;
    next_index_ = 0;
    total_ = n;
    done_ = 0;
    first_error_ = nullptr;
    ++generation_;
  }
  cv_work_.notify_all();
  // The calling thread joins in as a worker.
  {
    std::unique_lock<std::mutex> lock(mu_);
    while (next_index_ < total_) {
      const std::size_t i = next_index_++;
      lock.unlock();
      try {
        fn(i);
      } catch (...) {
        lock.lock();
        if (!first_error_) first_error_ = std::current_exception();
        ++done_;
        continue;
      }
      lock.lock();
      ++done_;
    }
    cv_done_.wait(lock, [&] { return done_ == total_; });
    fn_ = nullptr;
    if (first_error_) {
      auto err = first_error_;
      first_error_ = nullptr;
      lock.unlock();
      std::rethrow_exception(err);
    }
  }
}

}  // namespace distillkit
