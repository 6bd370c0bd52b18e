#pragma once

#include <cstddef>
#include <functional>

namespace stirap {

// Thread count from STIRAP_LAB_THREADS, else 1.
std::size_t default_thread_count();

// Calls fn(i) for i in [0, n) on up to `threads` workers. Work is claimed by
// index and every result slot is owned by one index, so the outcome does not
// depend on the thread count. The first exception thrown by fn is rethrown.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace stirap
