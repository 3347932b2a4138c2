#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fracture {

/// Number of worker threads used by the estimators. Results never depend on
/// it: work items draw from their own random streams and reductions run in
/// item order.
struct Workers {
  unsigned count = 1;

  static Workers hardware() {
    return {std::max(1u, std::thread::hardware_concurrency())};
  }
};

/// Runs fn(i) for i in [0, n) on up to `workers.count` threads. Items are
/// handed out dynamically; the first exception is rethrown after all threads
/// finish.
template <typename Fn>
void parallel_for(std::size_t n, Workers workers, Fn&& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers.count), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fracture
