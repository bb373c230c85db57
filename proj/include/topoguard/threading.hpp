#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace topoguard {

/// Worker cap shared by all parallel loops (CLI --threads / TOPOGUARD_THREADS).
int max_threads();
void set_max_threads(int n);

/// Run fn(i) for i in [0, n); results must be written to disjoint slots so the
/// outcome is independent of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min({max_threads(), n, 64});
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace topoguard
