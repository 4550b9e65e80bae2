#include "pkdyn/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace pkdyn {

namespace {
std::size_t g_workers = 0;
}

void set_worker_count(std::size_t n) { g_workers = n; }

std::size_t worker_count() {
  if (g_workers != 0) return g_workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace pkdyn
