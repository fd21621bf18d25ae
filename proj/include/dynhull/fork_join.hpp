#pragma once

// A small fork-join pool. Workers take the oldest queued task; a thread
// waiting in fork_join() runs the newest queued tasks until its own child is
// done, so nested forks never block a worker.

#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace dynhull {

class ForkJoinPool {
 public:
  /// `parallelism` counts the calling thread; parallelism <= 1 runs
  /// everything inline.
  explicit ForkJoinPool(unsigned parallelism) : parallelism_(parallelism == 0 ? 1 : parallelism) {
    for (unsigned i = 1; i < parallelism_; ++i) threads_.emplace_back([this] { worker_loop(); });
  }

  ~ForkJoinPool() {
    {
      std::lock_guard lk(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  ForkJoinPool(const ForkJoinPool&) = delete;
  ForkJoinPool& operator=(const ForkJoinPool&) = delete;

  unsigned parallelism() const { return parallelism_; }

  /// Runs `forked` as a task and `inline_part` on the calling thread, and
  /// returns once both are done. The first exception thrown by either is
  /// rethrown.
  template <class A, class B>
  void fork_join(A&& forked, B&& inline_part) {
    if (parallelism_ <= 1) {
      forked();
      inline_part();
      return;
    }
    Task task{std::function<void()>(std::forward<A>(forked))};
    {
      std::lock_guard lk(mutex_);
      queue_.push_back(&task);
    }
    cv_.notify_one();
    std::exception_ptr inline_error;
    try {
      inline_part();
    } catch (...) {
      inline_error = std::current_exception();
    }
    while (!task.done.load(std::memory_order_acquire))
      if (!run_newest()) std::this_thread::yield();
    if (inline_error) std::rethrow_exception(inline_error);
    if (task.error) std::rethrow_exception(task.error);
  }

 private:
  struct Task {
    std::function<void()> fn;
    std::atomic<bool> done{false};
    std::exception_ptr error{};

    void run() {
      try {
        fn();
      } catch (...) {
        error = std::current_exception();
      }
      done.store(true, std::memory_order_release);
    }
  };

  bool run_newest() {
    Task* t = nullptr;
    {
      std::lock_guard lk(mutex_);
      if (queue_.empty()) return false;
      t = queue_.back();
      queue_.pop_back();
    }
    t->run();
    return true;
  }

  void worker_loop() {
    for (;;) {
      Task* t = nullptr;
      {
        std::unique_lock lk(mutex_);
        cv_.wait(lk, [this] { return stop_ || !queue_.empty(); });
        if (stop_ && queue_.empty()) return;
        t = queue_.front();
        queue_.pop_front();
      }
      t->run();
    }
  }

  unsigned parallelism_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Task*> queue_;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

}  // namespace dynhull
