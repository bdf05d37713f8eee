#pragma once

#include <cstddef>
#include <functional>

namespace cwae {

/// Number of worker threads used by internal loops (default 1; 0 selects the
/// hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count() noexcept;

/// Runs body(begin, end) over contiguous chunks of [0, n). Results must be
/// written to per-index slots; callers reduce them afterwards in index order,
/// which keeps every reduction independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cwae
