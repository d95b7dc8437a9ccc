#pragma once

#include <cstddef>
#include <functional>

namespace weightlab {

// Number of threads used by block-parallel loops. 0 selects the hardware
// concurrency. Results never depend on this value.
void set_worker_count(unsigned workers);
unsigned worker_count();

// Splits [0, n) into fixed blocks of `grain` items and calls
// body(block, begin, end) once per block. Block boundaries depend only on n
// and grain, so per-block partial results combined in block order are
// independent of the worker count. If bodies throw, the exception of the
// lowest-numbered failing block is rethrown.
void for_each_block(std::size_t n, std::size_t grain,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t block_count(std::size_t n, std::size_t grain) {
  return grain == 0 ? 0 : (n + grain - 1) / grain;
}

}  // namespace weightlab
