#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hyerslab {

/// Execution knob for data-parallel loops. Results never depend on `threads`.
struct Exec {
  unsigned threads = 1;
};

/// Calls fn(i) for i in [0, n) split into contiguous chunks across threads.
/// fn must only write to slot i of caller-owned storage; the first exception
/// thrown by any chunk is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Exec exec, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1U, exec.threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hyerslab
