// core/include/hardylab/parallel.hpp
//
// Minimal index-parallel loop for the sweep engine. Each worker writes only
// its own output slots, so results are deterministic and independent of
// scheduling; on a single-core box this degrades to a plain loop.

#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace hardylab {

inline void parallel_for(long n, const std::function<void(long)>& body) {
  if (n <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const long workers = std::min<long>(static_cast<long>(hw), n);
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (long i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hardylab
