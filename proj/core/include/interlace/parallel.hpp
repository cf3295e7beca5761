#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace interlace {

// Runs body(first, last, acc) over contiguous blocks of [0, trials) and merges
// the per-block accumulators in block order. Each trial is expected to derive
// its own RNG stream from its index, which makes the result independent of
// `threads` whenever Acc::merge is exact.
template <class Acc, class Body>
Acc parallel_trials(std::uint64_t trials, int threads, Body&& body) {
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(threads, 1)), trials));
  std::vector<Acc> partial(workers);
  if (workers == 1) {
    body(std::uint64_t{0}, trials, partial[0]);
    return partial[0];
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t first = trials * w / workers;
    const std::uint64_t last = trials * (w + 1) / workers;
    pool.emplace_back([&, w, first, last] {
      try {
        body(first, last, partial[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc total = std::move(partial[0]);
  for (std::uint64_t w = 1; w < workers; ++w) total.merge(partial[w]);
  return total;
}

}  // namespace interlace
