#pragma once

// Deterministic chunked parallelism.  Results are accumulated per-chunk into indexed
// slots and reduced pairwise in index order, so the value is independent of the thread
// count (HOROKIT_THREADS caps the pool, default = hardware concurrency).

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include "horokit/quadrature.hpp"

namespace horokit {

inline int max_threads() {
  if (const char* env = std::getenv("HOROKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Applies body(i) for i in [0, count) and returns the pairwise sum of the results,
// identical regardless of thread count.
template <typename T>
inline T parallel_sum(int count, const std::function<T(int)>& body) {
  if (count <= 0) return T{};
  std::vector<T> slots(count, T{});
  const int nthreads = std::min(max_threads(), count);
  if (nthreads <= 1) {
    for (int i = 0; i < count; ++i) slots[i] = body(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= count) return;
          slots[i] = body(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return pairwise_sum(std::move(slots));
}

}  // namespace horokit
