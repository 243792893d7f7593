#pragma once

#include <cstddef>
#include <functional>

namespace tripeval {

// Number of worker threads used by parallel_for. 0 means
// std::thread::hardware_concurrency().
void set_thread_count(unsigned threads);
unsigned thread_count();

// Calls body(begin, end) over disjoint contiguous chunks covering [0, n).
// Chunks may run concurrently; body must only write to per-index outputs.
// Exceptions thrown by a chunk are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 64);

}  // namespace tripeval
