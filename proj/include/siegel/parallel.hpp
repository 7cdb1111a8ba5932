#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace siegel {

// Chunked parallel loop with results written to caller-owned slots, so the
// outcome is independent of the worker count. Chunk size is fixed, workers
// pull chunks from an atomic counter.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn,
                         std::size_t chunk = 16) {
  if (n == 0) return;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t start = next.fetch_add(chunk);
      if (start >= n || failed.load()) return;
      std::size_t end = std::min(n, start + chunk);
      try {
        for (std::size_t i = start; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<std::size_t>(jobs, (n + chunk - 1) / chunk);
  pool.reserve(count);
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// compensated (Neumaier) accumulation in a deterministic order
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double total() const { return sum + comp; }
};

}  // namespace siegel
