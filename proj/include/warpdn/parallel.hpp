#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace warpdn {

/// Worker cap from WARPDN_THREADS (default: hardware concurrency, max 8).
inline int thread_budget() {
  if (const char* env = std::getenv("WARPDN_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return int(hw ? std::min(hw, 8u) : 1);
}

/// Deterministic parallel map: fn(i) for i in [0, n), results ordered by index
/// regardless of scheduling.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace warpdn
