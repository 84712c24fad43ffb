#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace boot3d {

/// Runs fn(i) for i in [0, n). Work items must be independent and write
/// only to their own slots so that results do not depend on the thread
/// count. threads <= 1 runs inline.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t workers = std::min<size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace boot3d
