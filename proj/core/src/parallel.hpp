#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fbopt::detail {

/// Runs body(begin, end, chunk) over `count` items split into contiguous
/// chunks, one per hardware thread. Chunk boundaries depend only on `count`
/// and the thread count; callers reduce per-chunk results themselves.
inline void parallel_chunks(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
    std::size_t* chunks_used = nullptr) {
  const std::size_t threads = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (chunks_used) {
    *chunks_used = threads;
  }
  if (threads <= 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = count * t / threads;
    const std::size_t end = count * (t + 1) / threads;
    pool.emplace_back(body, begin, end, t);
  }
  for (auto& thread : pool) {
    thread.join();
  }
}

inline std::size_t chunk_count(std::size_t count) {
  return std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
}

}  // namespace fbopt::detail
