#pragma once

#include <cstddef>
#include <functional>

namespace deepselect {

// Worker count: DEEPSELECT_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t default_worker_count();

// Calls body(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; the assignment of indices to threads is static so
// there is no shared mutable state beyond what `body` touches. The first
// exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace deepselect
