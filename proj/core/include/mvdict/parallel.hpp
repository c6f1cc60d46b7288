#pragma once

#include <cstddef>
#include <functional>

namespace mvdict {

/// Process-wide cap on worker threads (default: hardware concurrency).
void set_max_threads(int threads);
int max_threads();

/// Runs fn(i) for i in [0, n). Work items must be independent and write to
/// disjoint slots; reductions happen in the caller, in index order, so
/// results do not depend on the thread count. Nested calls run serially on
/// the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mvdict
