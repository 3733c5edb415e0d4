#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crgeo {

/// Runs fn(i) for i in [0, count) on up to `threads` workers.  Work items are
/// claimed from a shared counter; callers that write results into a
/// pre-sized array indexed by i get identical output for any thread count.
/// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(size_t count, unsigned threads, const Fn& fn) {
  if (threads <= 1 || count < 2) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  threads = std::min<size_t>(threads, count);
  std::atomic<size_t> next{0};
  size_t error_index = count;
  std::exception_ptr first_error;  // error at the lowest index, for determinism
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace crgeo
