#pragma once

#include <cstddef>
#include <functional>

namespace fraxdim {

// Worker count: FRAXDIM_THREADS if set and positive, else the hardware concurrency.
int thread_count();

// Calls fn(i) for i in [0, n) across thread_count() workers. fn must only write to state
// owned by index i; results are then independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace fraxdim
