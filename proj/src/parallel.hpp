#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mbhd::detail {

/// Worker count: MBHD_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("MBHD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n), rows interleaved across workers. Each index is
/// handled by exactly one worker, so per-index results do not depend on the
/// worker count.
template <class Fn>
void parallel_rows(std::size_t n, Fn&& fn, std::size_t min_rows_per_worker = 32) {
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / min_rows_per_worker));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace mbhd::detail
