#pragma once

#include <cstddef>
#include <functional>

namespace entpack {

/// Worker count from ENTPACK_WORKERS, else the hardware concurrency (at least 1).
int default_worker_count();

/// Resolves a requested count: values <= 0 mean default_worker_count().
int resolve_workers(int requested);

/// Runs body(begin, end, chunk) over `chunks` contiguous ranges covering [0, n).
///
/// The partition depends only on (n, chunks), never on the worker count, so
/// per-chunk results can be combined in a fixed order.
void parallel_chunks(std::size_t n, std::size_t chunks, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace entpack
