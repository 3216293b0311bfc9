#pragma once

#include <cstddef>
#include <functional>

namespace airy {

// Runs fn(i) for i in [0, count) on up to `threads` workers with static
// contiguous chunks. threads <= 0 means hardware concurrency. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

int resolve_thread_count(int threads);

}  // namespace airy
