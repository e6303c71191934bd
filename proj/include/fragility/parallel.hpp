#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace fragility {

// Runs body(i) for i in [0, n) across `threads` workers with a static block
// split. Each index must be an independent pure task; results land in
// preallocated slots, so the outcome is identical for any thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto t = static_cast<std::size_t>(threads);
  std::vector<std::thread> workers;
  workers.reserve(t);
  for (std::size_t w = 0; w < t; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += t) body(i);
    });
  }
  for (auto& th : workers) th.join();
}

}  // namespace fragility
