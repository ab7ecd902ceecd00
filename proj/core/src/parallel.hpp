#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace anscombe::detail {

// Samples are processed in fixed 4096-wide blocks; per-block accumulators
// are reduced in block order. Outputs therefore depend only on the sample
// count, never on how many workers ran the blocks.
constexpr int64_t kBlockSize = 4096;

template <class Acc, class Body, class Reduce>
void run_blocked(int64_t total, int threads, Body&& body, Reduce&& reduce) {
  if (total <= 0) return;
  const int64_t nblocks = (total + kBlockSize - 1) / kBlockSize;
  if (threads <= 1 || nblocks <= 1) {
    for (int64_t b = 0; b < nblocks; ++b) {
      Acc acc{};
      body(b * kBlockSize, std::min(total, (b + 1) * kBlockSize), acc);
      reduce(acc);
    }
    return;
  }
  std::vector<Acc> slots(static_cast<std::size_t>(nblocks));
  std::atomic<int64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const int64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      body(b * kBlockSize, std::min(total, (b + 1) * kBlockSize),
           slots[static_cast<std::size_t>(b)]);
    }
  };
  const int workers = static_cast<int>(std::min<int64_t>(threads, nblocks));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (int64_t b = 0; b < nblocks; ++b) reduce(slots[static_cast<std::size_t>(b)]);
}

}  // namespace anscombe::detail
