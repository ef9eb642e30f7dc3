#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace advcal {

// Global worker count. 0 = hardware concurrency, 1 = sequential (default).
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}

inline void set_threads(int n) { thread_count().store(n); }

inline int resolved_threads() {
  int n = thread_count().load();
  if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

// Elementwise parallel loop. Each index writes only its own slot, so the
// result does not depend on the thread count; reductions run sequentially
// over the filled vector afterwards.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const int workers = resolved_threads();
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace advcal
