#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kg {

// Worker count: KG_THREADS if set (clamped to [1, 256]), else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("KG_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v > 256 ? 256 : v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs block_fn(begin, end) over a contiguous partition of [0, n).
// Results must be written to disjoint, index-addressed locations so the
// outcome does not depend on the worker count.
inline void parallel_for_blocks(std::size_t n,
                                const std::function<void(std::size_t, std::size_t)>& block_fn) {
  const int t = thread_count();
  if (t <= 1 || n < 2) {
    if (n > 0) block_fn(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t base = n / workers, rem = n % workers;
  std::size_t b = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t e = b + base + (w < rem ? 1 : 0);
    pool.emplace_back([&block_fn, b, e] { block_fn(b, e); });
    b = e;
  }
  for (auto& th : pool) th.join();
}

// Deterministic parallel sum: [0, n) is cut into fixed-size chunks whose
// boundaries do not depend on the worker count; per-chunk partials are
// combined in chunk order, so the result is bitwise reproducible.
template <class ChunkFn>
double parallel_chunk_sum(std::size_t n, std::size_t chunk, ChunkFn&& fn) {
  if (n == 0) return 0.0;
  if (chunk == 0) chunk = 1;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(nchunks, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= nchunks) break;
      const std::size_t b = c * chunk;
      const std::size_t e = std::min(n, b + chunk);
      partial[c] = fn(b, e);
    }
  };
  const int t = thread_count();
  if (t <= 1 || nchunks < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(t), nchunks);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace kg
