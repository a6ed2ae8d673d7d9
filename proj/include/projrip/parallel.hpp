#pragma once

#include <cstddef>
#include <functional>

namespace projrip {

/// Worker count from PROJRIP_THREADS (unset or 0 means hardware concurrency).
std::size_t thread_count();

/// Runs fn(i) for i in [0, count) across thread_count() workers. Callers write
/// results into index-addressed slots, so the reduction order never depends
/// on scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace projrip
