#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sdfloc {

// Runs fn(begin, end) over contiguous static partitions of [0, count).
// Partitioning depends only on count and num_threads; callers that write
// disjoint outputs per index get results independent of num_threads.
template <typename Fn>
void ParallelForRange(size_t count, int num_threads, Fn&& fn) {
  const size_t workers = std::clamp<size_t>(
      num_threads < 1 ? 1 : static_cast<size_t>(num_threads), 1,
      std::max<size_t>(count, 1));
  if (workers == 1 || count < 2) {
    fn(size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    const size_t begin = count * w / workers;
    const size_t end = count * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename Fn>
void ParallelFor(size_t count, int num_threads, Fn&& fn) {
  ParallelForRange(count, num_threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace sdfloc
