#pragma once

#include <functional>

namespace quasimet {

// Number of worker threads used by the data-parallel loops.
// Controlled by the QUASIMET_THREADS environment variable (clamped to >= 1),
// defaulting to the hardware concurrency.
int worker_count();

// Runs fn(i) for i in [begin, end), split into contiguous chunks across
// workers. Callers must make writes disjoint per index; results are then
// independent of the thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace quasimet
