#pragma once

#include <cstddef>
#include <functional>

namespace wlansim::util {

// Runs fn(0..count-1) across up to `jobs` worker threads. Results must be
// written to pre-sized slots so output order is independent of scheduling;
// jobs <= 1 runs inline.
void parallel_for_index(std::size_t count, int jobs,
                        const std::function<void(std::size_t)>& fn);

}  // namespace wlansim::util
