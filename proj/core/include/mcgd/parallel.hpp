#pragma once

#include <cstddef>
#include <functional>

namespace mcgd {

// Worker count: MCGD_THREADS if set (>= 1), else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n). Work items must be independent; results must
// be written to pre-sized slots so the outcome is schedule-independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mcgd
