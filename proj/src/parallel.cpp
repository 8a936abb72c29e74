#include "slabewald/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace slabewald {

namespace {
int g_threads = 1;
}

void set_num_threads(int n) { g_threads = std::max(1, n); }
int num_threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(g_threads), n);
  if (nt <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 1; t < nt; ++t) {
    std::size_t b = t * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(fn, b, e);
  }
  fn(0, std::min(n, chunk));
  for (auto& th : pool) th.join();
}

}  // namespace slabewald
