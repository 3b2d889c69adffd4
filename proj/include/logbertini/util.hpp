#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "logbertini/numeric.hpp"

namespace logbertini {

// Deterministic parallelism support. Tasks are indexed, every task derives
// its own PRNG stream from the root seed and its index, and results are
// collected into a vector addressed by index. The outcome is therefore a
// pure function of (inputs, root seed) and never depends on the worker
// count or on scheduling order.

// splitmix64 finalizer over (root, index); the standard constants give
// well-mixed, collision-free streams for distinct indices
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Runs fn(i) for i in [0, count) on up to `workers` threads and returns the
// results in index order. Exceptions from tasks are rethrown in the caller;
// remaining tasks are abandoned once one has failed.
template <class Fn>
auto parallel_map(long count, long workers, Fn&& fn)
    -> std::vector<decltype(fn(static_cast<long>(0)))> {
  using R = decltype(fn(static_cast<long>(0)));
  if (count < 0) throw config_error("parallel_map: negative task count");
  if (workers < 1) throw config_error("parallel_map: worker count must be positive");
  std::vector<std::optional<R>> slots(static_cast<size_t>(count));
  if (workers == 1 || count <= 1) {
    for (long i = 0; i < count; ++i) slots[static_cast<size_t>(i)].emplace(fn(i));
  } else {
    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_lock;
    auto body = [&]() {
      while (!stop.load()) {
        long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          slots[static_cast<size_t>(i)].emplace(fn(i));
        } catch (...) {
          std::lock_guard<std::mutex> g(error_lock);
          if (!first_error) first_error = std::current_exception();
          stop.store(true);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    long spawn = workers < count ? workers : count;
    for (long w = 0; w < spawn; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::vector<R> out;
  out.reserve(static_cast<size_t>(count));
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace logbertini
