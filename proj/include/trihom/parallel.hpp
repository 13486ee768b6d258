#pragma once

#include <thread>
#include <vector>

namespace trihom {

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// worker. Callers must write disjoint outputs per index so results are
// bitwise identical for any thread count.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    fn(0L, n);
    return;
  }
  const int nw = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const long chunk = (n + nw - 1) / nw;
  for (int t = 0; t < nw; ++t) {
    const long b = t * chunk;
    const long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace trihom
