// Deterministic trial-parallelism: results are collected per trial index and
// reduced in index order, so the outcome is independent of scheduling.
// LINDY_THREADS caps the worker count.
#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace lindy {

inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("LINDY_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

// Runs fn(i) for i in [0, n) across the thread budget.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  unsigned workers = thread_budget();
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace lindy
