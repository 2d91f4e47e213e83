#pragma once

#include <cstddef>
#include <functional>

namespace tlab {

/// Worker count used when a call does not pass one explicitly. Initialised
/// from the LAB_THREADS environment variable, falling back to the hardware
/// concurrency.
std::size_t default_threads();
void set_default_threads(std::size_t k);

/// Runs body(i) for i in [0, count). Indices are handed out dynamically, so
/// body must write only to slot i of any shared output; callers then reduce
/// in index order, which keeps results independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace tlab
