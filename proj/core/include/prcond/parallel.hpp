// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace prcond {

/// Worker count: PRCOND_THREADS if set and positive, else the hardware count.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = worker_count()).
/// Indices are handed out in contiguous blocks; the first exception thrown by
/// any worker is rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace prcond
