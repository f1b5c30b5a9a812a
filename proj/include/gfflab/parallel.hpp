#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gfflab {

/// Runs body(worker, begin, end) over contiguous chunks of [0, count).
/// Chunking affects scheduling only; callers index results by position so
/// output never depends on the worker count. The first exception thrown by
/// any worker is rethrown on the calling thread.
template <typename Body>
void parallel_chunks(std::size_t count, int workers, Body&& body) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                                                 std::max<std::size_t>(count, 1));
  if (w == 1) {
    body(0, std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(w);
  for (std::size_t t = 0; t < w; ++t) {
    const std::size_t begin = count * t / w;
    const std::size_t end = count * (t + 1) / w;
    threads.emplace_back([&, t, begin, end] {
      try {
        body(static_cast<int>(t), begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gfflab
