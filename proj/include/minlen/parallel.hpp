#pragma once

#include <cstddef>
#include <functional>

namespace minlen {

/// Worker count: MINLEN_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned thread_limit();

/// Calls body(i) for i in [0, count) on up to `threads` workers (0 = thread_limit()).
/// The first exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace minlen
