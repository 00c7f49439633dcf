#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace spintomo {

/// SPINTOMO_THREADS overrides `requested`; a non-positive result means hardware concurrency.
inline int resolve_threads(int requested) {
  if (const char* env = std::getenv("SPINTOMO_THREADS")) {
    try {
      requested = std::stoi(env);
    } catch (const std::exception&) {
    }
  }
  if (requested <= 0) requested = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, requested);
}

/// Calls fn(chunk) for every chunk in [0, num_chunks) on up to `threads` workers.
/// The first exception thrown by any chunk is rethrown on the caller's thread.
template <class Fn>
void parallel_for_chunks(std::int64_t num_chunks, int threads, Fn&& fn) {
  const int workers = static_cast<int>(std::min<std::int64_t>(std::max(1, threads), num_chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < num_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::int64_t c = next++; c < num_chunks; c = next++) {
      try {
        fn(c);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = num_chunks;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace spintomo
