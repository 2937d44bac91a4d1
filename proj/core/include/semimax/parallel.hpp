#pragma once

#include <cstddef>
#include <functional>

namespace semimax {

/// Thread count resolution: explicit argument if > 0, else the
/// SEMIMAX_THREADS environment variable, else 1.
int resolve_threads(int requested = 0);

/// Static block partition of [0, n) over the given number of threads.
/// Each index is processed exactly once; results written to preallocated
/// slots are identical for any thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace semimax
