#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace msdehaze {

inline std::atomic<int>& worker_count_slot() {
  static std::atomic<int> count{0};  // 0 = all hardware threads
  return count;
}

inline void set_worker_count(int count) { worker_count_slot() = count; }

inline int worker_count() {
  const int configured = worker_count_slot();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Indices are split into contiguous chunks,
// one thread each, and every index is processed exactly once in ascending
// order within its chunk, so results never depend on the thread count.
template <typename Fn>
void parallel_for(int count, const Fn& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (int i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace msdehaze
