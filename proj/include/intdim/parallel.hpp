#pragma once

#include <cstddef>
#include <functional>

namespace intdim {

/// Size of the process-wide worker pool. Defaults to the hardware concurrency.
int worker_count();

/// Sets the pool size; values below 1 are rejected.
void set_worker_count(int workers);

/// Runs fn(0..count-1) on the pool. Results must be written by index so the outcome does not
/// depend on scheduling. Calls made from inside a worker run inline. If any call throws, the
/// exception from the lowest index is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace intdim
