// Deterministic parallel helpers: results are bitwise-identical for any worker
// count because work is split into fixed blocks merged in index order, and all
// randomness is derived per item from (seed, index), never from thread state.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace thurston {

inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("THURSTON_KIT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return static_cast<int>(hw);
}

// Runs fn(block_index, begin, end) over [0, n) split into fixed-size blocks.
// Blocks are claimed dynamically but identified by index, so any per-block
// output merged in block order is independent of scheduling.
inline void parallel_blocks(std::size_t n, std::size_t block_size,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  std::size_t n_blocks = (n + block_size - 1) / block_size;
  int workers = worker_count();
  if (workers <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  int k = std::min<std::size_t>(workers, n_blocks);
  pool.reserve(k);
  for (int i = 1; i < k; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

// splitmix64: tiny, portable, and good enough for sampling experiments; the
// point is determinism across platforms, not cryptographic quality.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

// Independent stream for item `index` under `seed`; any worker arrives at the
// same stream for the same item.
inline SplitMix64 item_rng(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  mix.next();
  return mix;
}

}  // namespace thurston
