#pragma once

#include <cstddef>
#include <functional>

namespace herdbook {

/// Calls fn(i) for i in [0, n) on up to `threads` worker threads. Tasks are
/// handed out in index order. The first exception thrown by any task is
/// rethrown after all workers have stopped; remaining tasks are skipped.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace herdbook
