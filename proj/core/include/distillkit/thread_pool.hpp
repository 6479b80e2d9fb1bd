// distillkit/thread_pool.hpp

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

#ifndef DISTILLKIT_THREAD_POOL_HPP_
#define DISTILLKIT_THREAD_POOL_HPP_

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace distillkit {

/// Fixed-size worker pool for data-parallel loops. Tasks must write only to
/// slots owned by their index, so results are independent of the worker
/// count; any reduction over task outputs is done by the caller in index
/// order. That is what keeps training and evaluation bit-deterministic
/// regardless of --workers.
class ThreadPool {
 public:
  /// n_workers <= 1 runs everything inline on the calling thread.
  explicit ThreadPool(int n_workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int num_workers() const { return static_cast<int>(threads_.size()) + 1; }

  /// Runs fn(i) for i in [0, n). Blocks until all iterations finish.
  /// Exceptions thrown by fn are rethrown on the calling thread (first one
  /// wins).
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

  static int default_workers();

 private:
  void worker_loop();

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_work_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::size_t next_index_ = 0;
  std::size_t total_ = 0;
  std::size_t done_ = 0;
  std::exception_ptr first_error_;
  bool shutdown_ = false;
  std::size_t generation_ = 0;
};

}  // namespace distillkit

#endif  // DISTILLKIT_THREAD_POOL_HPP_
