#pragma once

#include <cstddef>
#include <functional>

namespace tpex::detail {

/// Number of worker threads to use; 0 selects hardware concurrency.
unsigned resolve_threads(unsigned requested) noexcept;

/// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
/// visited exactly once, so results are independent of the partitioning as
/// long as body writes only to its own indices.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tpex::detail
