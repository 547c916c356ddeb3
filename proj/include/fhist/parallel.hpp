#pragma once

#include <cstddef>
#include <functional>

namespace fhist {

// Upper bound on worker threads used by the parallel loops (0 = hardware).
void set_max_threads(unsigned threads);
unsigned max_threads();

// Runs body(begin, end, worker) over contiguous chunks of [0, count). Chunk
// boundaries depend only on count and the worker count, and callers reduce
// per-worker partials in worker order, so results do not depend on scheduling.
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& body,
                     unsigned workers = 0);

// Number of workers parallel_chunks will use for a given count.
unsigned worker_count(std::size_t count, unsigned workers = 0);

}  // namespace fhist
