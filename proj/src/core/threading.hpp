#pragma once

#include <cstdint>
#include <functional>

namespace latcart {

// Process-wide cap on worker threads. 0 = hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs f(begin, end) over disjoint chunks of [0, n). Chunking is static,
// so any reduction that is order-independent per element (per-cell writes,
// max over elements) gives results identical to the serial order.
// min_per_worker controls how small a slice is still worth a thread.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& f,
                  std::int64_t min_per_worker = 4096);

} // namespace latcart
