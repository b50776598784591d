#pragma once

#include <cstddef>
#include <functional>

namespace qed {

// Worker count: hardware concurrency, capped by the QED_THREADS environment
// variable when it holds a positive integer.
unsigned worker_count();

// Calls body(i) for i in [0, n). Iterations are split into contiguous blocks,
// one per worker; body must only write state owned by index i. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qed
