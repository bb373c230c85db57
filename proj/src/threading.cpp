#include "topoguard/threading.hpp"

#include <atomic>

namespace topoguard {

namespace {
std::atomic<int> g_max_threads{0};
}

int max_threads() {
  const int n = g_max_threads.load();
  if (n > 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 0); }

}  // namespace topoguard
