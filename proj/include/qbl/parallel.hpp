#pragma once

#include <cstddef>
#include <functional>

namespace qbl::par {

// Worker count resolution: explicit argument > set_default_threads (CLI
// --threads) > QBL_THREADS env var > hardware concurrency.
int default_threads();
void set_default_threads(int threads);
int resolve_threads(int requested);

// Splits [0, total) into one contiguous chunk per worker and runs them on a
// temporary thread team. Chunk boundaries depend only on (total, threads).
void run_chunks(std::size_t total, int threads,
                const std::function<void(int chunk, std::size_t begin, std::size_t end)>& body);

// Dynamic task fan-out over [0, count) with a bounded worker pool. The body
// must be safe to call concurrently for distinct indices. Exceptions from the
// body are captured and the first one is rethrown after all workers join.
void run_tasks(std::size_t count, int threads, const std::function<void(std::size_t index)>& body);

}  // namespace qbl::par
