#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lorentzlab {

// Deterministic parallel loop: fn(i) for i in [0, n). Each invocation must
// write only to state owned by index i; with that discipline the results are
// bit-identical for any thread count, including 1 (serial). If invocations
// throw, the exception of the lowest index is rethrown after all workers
// finish, so serial and parallel runs fail identically.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn,
                         int threads = 0) {
  if (threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    threads = static_cast<int>(hc == 0 ? 1 : hc);
    if (threads > 16) threads = 16;
  }
  if (threads == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  size_t count = std::min<size_t>(static_cast<size_t>(threads), n);
  pool.reserve(count);
  for (size_t k = 0; k < count; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace lorentzlab
