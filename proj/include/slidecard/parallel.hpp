#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace slidecard {

inline unsigned default_workers() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Splits [0, n) into at most `workers` contiguous ranges and runs
// fn(begin, end) on each, returning after all ranges finish. Runs inline for
// one worker or small n.
template <class Fn>
void parallel_ranges(std::size_t n, unsigned workers, Fn&& fn,
                     std::size_t min_per_worker = 4096) {
  const std::size_t max_workers = std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_per_worker));
  const std::size_t parts = std::min<std::size_t>(std::max(1u, workers), max_workers);
  if (parts <= 1) {
    if (n > 0) fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(parts - 1);
  const std::size_t chunk = n / parts;
  const std::size_t extra = n % parts;
  std::size_t begin = 0;
  std::size_t first_end = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t end = begin + chunk + (p < extra ? 1 : 0);
    if (p == 0) {
      first_end = end;
    } else {
      threads.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  fn(std::size_t{0}, first_end);
}

}  // namespace slidecard
