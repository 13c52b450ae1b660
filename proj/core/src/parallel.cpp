#include "symtan/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace symtan {

namespace {
int g_budget = 1;
}

void set_thread_budget(int n) { g_budget = std::max(1, n); }
int thread_budget() { return g_budget; }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  int workers = std::min<std::int64_t>(g_budget, n);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next(0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::int64_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace symtan
