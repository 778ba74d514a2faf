#include "glancing/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace glancing {

namespace {
std::atomic<int> g_workers{0};
}

void set_workers(int n) { g_workers = std::max(0, n); }

int workers() {
  const int n = g_workers.load();
  if (n > 0)
    return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
  const std::size_t nw = std::min<std::size_t>(workers(), n);
  if (nw <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t lo = n * w / nw, hi = n * (w + 1) / nw;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i)
          body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m);
        if (!err)
          err = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
}

} // namespace glancing
