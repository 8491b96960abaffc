#pragma once

#include <cstddef>
#include <functional>

namespace desmooth {

// Worker cap: DESMOOTH_THREADS when set, otherwise machine parallelism.
std::size_t worker_count();

// Runs body(chunk) for chunk in [0, chunk_count) across up to worker_count()
// threads. Chunk identity is independent of the thread count, so callers that
// keep per-chunk state and merge in chunk order get thread-count-independent
// results. Exceptions from workers are rethrown on the calling thread.
void parallel_chunks(std::size_t chunk_count, const std::function<void(std::size_t)>& body);

}  // namespace desmooth
