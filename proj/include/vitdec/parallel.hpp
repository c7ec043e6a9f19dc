#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace vitdec {

/// Run fn(first, last) over a partition of [0, n) on `workers` threads.
/// Chunks are contiguous so callers can write disjoint output slices.
template <typename Fn>
void parallel_for_chunks(std::int64_t n, int workers, Fn&& fn) {
  if (n <= 0) return;
  if (workers <= 1 || n == 1) {
    fn(std::int64_t{0}, n);
    return;
  }
  const int w = static_cast<int>(std::min<std::int64_t>(workers, n));
  const std::int64_t chunk = (n + w - 1) / w;
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (int i = 0; i < w; ++i) {
    const std::int64_t first = i * chunk;
    const std::int64_t last = std::min<std::int64_t>(first + chunk, n);
    if (first >= last) break;
    threads.emplace_back([&fn, first, last] { fn(first, last); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace vitdec
