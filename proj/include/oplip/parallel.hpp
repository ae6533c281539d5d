#pragma once

#include <cstddef>
#include <functional>

namespace oplip {

// Number of worker threads used by parallel_for. Defaults to the hardware
// concurrency; 0 restores the default.
void set_worker_count(unsigned count);
unsigned worker_count();

// Runs body(i) for i in [0, n). Iterations are split into contiguous chunks,
// one per worker; callers write results into slot i so the outcome does not
// depend on scheduling. The first exception thrown by any iteration is
// rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace oplip
