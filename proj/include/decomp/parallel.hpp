#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace decomp {

// Runs fn(i) for i in [0, n) on up to `threads` workers with a static
// partition. Callers own any output buffers (one slot per index), so results
// are identical for every thread count; reductions happen afterwards in
// index order. The first exception thrown by any worker is rethrown here.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads > n) threads = n;
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
    const int hi = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
    pool.emplace_back([&, lo, hi, t] {
      try {
        for (int i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace decomp
