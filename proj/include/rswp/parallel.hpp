#pragma once

// Minimal fork-join pool for the stencil kernels. Work is split into
// contiguous index ranges; every index is computed by exactly one thread
// with the same arithmetic regardless of the split, so results do not
// depend on the thread count.

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rswp {

class ThreadPool {
 public:
  explicit ThreadPool(unsigned threads = 1) : threads_(std::max(1u, threads)) {
    for (unsigned t = 1; t < threads_; ++t) workers_.emplace_back([this, t] { worker(t); });
  }
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;
  ~ThreadPool() {
    {
      std::lock_guard lk(m_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  unsigned size() const { return threads_; }

  /// Calls fn(begin, end) over a partition of [0, n); blocks until done.
  void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads_ == 1 || n < 2) {
      if (n) fn(0, n);
      return;
    }
    {
      std::lock_guard lk(m_);
      job_ = &fn;
      n_ = n;
      pending_ = threads_ - 1;
      ++generation_;
    }
    cv_.notify_all();
    run_chunk(0);
    std::unique_lock lk(m_);
    done_cv_.wait(lk, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

 private:
  void run_chunk(unsigned t) {
    const std::size_t per = (n_ + threads_ - 1) / threads_;
    const std::size_t b = std::min(n_, per * t);
    const std::size_t e = std::min(n_, b + per);
    if (b < e) (*job_)(b, e);
  }

  void worker(unsigned t) {
    std::size_t seen = 0;
    for (;;) {
      {
        std::unique_lock lk(m_);
        cv_.wait(lk, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
      }
      run_chunk(t);
      {
        std::lock_guard lk(m_);
        if (--pending_ == 0) done_cv_.notify_one();
      }
    }
  }

  unsigned threads_;
  std::vector<std::thread> workers_;
  std::mutex m_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t n_ = 0;
  unsigned pending_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
};

inline unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace rswp
