#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace anonaudit {

/// Worker cap for parallel sections: ANONAUDIT_THREADS when set, otherwise
/// the hardware concurrency.
inline std::size_t worker_count() {
  if (const char* env = std::getenv("ANONAUDIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

/// Run fn(i) for i in [0, count) on a bounded pool. Each index is processed
/// exactly once; callers write results into slot i, so the output layout is
/// independent of scheduling. fn must not throw.
template <typename Fn>
void parallel_for_indexed(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace anonaudit
