#pragma once

#include <cstddef>
#include <functional>

namespace qwalk {

// Runs body(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Results must be written by index; the first exception thrown
// by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace qwalk
