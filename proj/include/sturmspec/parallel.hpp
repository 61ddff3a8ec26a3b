#pragma once

#include <cstddef>
#include <functional>

namespace sturm {

// Deterministic slot parallelism: item i runs on thread i mod nthreads and
// each thread walks its items in increasing order, so any output written to
// per-item slots is identical for every thread count. If several items
// throw, the exception with the lowest item index is rethrown after all
// threads join. Worker threads inherit the caller's numeric precision.
void parallel_for(std::size_t n, unsigned nthreads,
                  const std::function<void(std::size_t)>& body);

}  // namespace sturm
