#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace diraclab {

/// Fixed-width worker group. parallel_for hands out indices dynamically, so
/// callers must write results by index; nothing here depends on scheduling.
class WorkerPool {
 public:
  explicit WorkerPool(int threads = 1) : threads_(threads < 1 ? 1 : threads) {}

  int threads() const { return threads_; }

  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) const {
    if (threads_ == 1 || count < 2) {
      for (std::size_t i = 0; i < count; ++i) body(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_lock;
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(error_lock);
          if (!error) error = std::current_exception();
        }
      }
    };
    const std::size_t extra = std::min<std::size_t>(static_cast<std::size_t>(threads_), count) - 1;
    std::vector<std::thread> workers;
    workers.reserve(extra);
    for (std::size_t t = 0; t < extra; ++t) workers.emplace_back(work);
    work();
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
  }

 private:
  int threads_;
};

}  // namespace diraclab
