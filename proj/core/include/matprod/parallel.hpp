#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace matprod {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(begin, end) over a static partition of [0, count). Results must be
/// written to disjoint, index-addressed storage; then the output is identical
/// for every thread count.
inline void parallel_blocks(long count, int threads,
                            const std::function<void(long, long)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    fn(0, count);
    return;
  }
  long block = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    long begin = t * block;
    long end = begin + block < count ? begin + block : count;
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& th : pool) th.join();
}

/// Pairwise (cascade) summation. Association is fixed by the array order, so
/// reductions do not depend on how the work was threaded.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_mean(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

}  // namespace matprod
