#pragma once

#include <cstddef>
#include <functional>

namespace lwrt {

// Number of worker threads used by parallel_for (hardware concurrency, at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n) across worker threads.  Exceptions from any
// worker are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lwrt
