#pragma once

#include <cstddef>
#include <functional>

namespace tb {

/// Worker count: hardware concurrency, capped by the TB_THREADS variable.
unsigned thread_count();

/// Runs body(i) for i in [0, n) over thread_count() workers. Exceptions
/// escaping body are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tb
