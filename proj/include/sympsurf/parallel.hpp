#pragma once

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <thread>
#include <vector>

namespace sympsurf {

// Worker cap: SYMPSURF_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
inline int max_threads() {
  if (const char* env = std::getenv("SYMPSURF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Minimum of value_at(0..n-1) with a deterministic reduction: each worker
// owns a contiguous index chunk and chunk minima are folded in chunk order,
// so the result is independent of scheduling.
template <class F>
double parallel_min(std::size_t n, F&& value_at) {
  const double inf = std::numeric_limits<double>::infinity();
  if (n == 0) return inf;

  const std::size_t nt =
      std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
  if (nt <= 1 || n < 2048) {
    double m = inf;
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, value_at(i));
    return m;
  }

  std::vector<double> chunk_min(nt, inf);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = n * t / nt;
      const std::size_t hi = n * (t + 1) / nt;
      double m = inf;
      for (std::size_t i = lo; i < hi; ++i) m = std::min(m, value_at(i));
      chunk_min[t] = m;
    });
  }
  for (auto& th : pool) th.join();

  double m = inf;
  for (double c : chunk_min) m = std::min(m, c);
  return m;
}

}  // namespace sympsurf
