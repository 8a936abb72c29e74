#pragma once

#include <cstddef>
#include <functional>

namespace slabewald {

// Number of worker threads used by parallel_for. Defaults to 1.
void set_num_threads(int n);
int num_threads();

// Calls fn(begin, end) on contiguous chunks of [0, n). Chunk boundaries depend
// on the thread count, so callers must only write to disjoint outputs indexed
// inside their chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace slabewald
