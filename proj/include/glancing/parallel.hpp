#pragma once

#include <cstddef>
#include <functional>

namespace glancing {

// Worker count used by every parallel loop in the library. Zero means one
// worker per logical core.
void set_workers(int n);
int workers();

// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
// visited exactly once, so results written per index are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace glancing
