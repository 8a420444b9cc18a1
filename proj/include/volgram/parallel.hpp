#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace volgram {

// Number of worker threads to use. requested == 0 means "auto" (hardware
// concurrency). The VOLGRAM_THREADS environment variable caps the result
// either way. Always returns at least 1.
unsigned resolve_threads(unsigned requested = 0);

// Runs body(i) for i in [0, count) on up to `threads` workers (resolved via
// resolve_threads). Work is split into contiguous index blocks, so each index
// is processed exactly once; callers get thread-count-independent results by
// writing to slot i only. The first worker exception is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  const unsigned workers =
      count == 0 ? 1
                 : static_cast<unsigned>(
                       std::min<std::size_t>(resolve_threads(threads), count));
  if (count == 0) return;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers;
    const std::size_t hi = count * (w + 1) / workers;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace volgram
