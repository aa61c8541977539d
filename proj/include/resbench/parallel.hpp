#pragma once

#include <cstddef>
#include <functional>

namespace resbench {

/// Worker count used when a caller passes 0.
std::size_t default_workers() noexcept;

/// Calls fn(i) for every i in [0, count) on up to `workers` threads. Jobs must
/// write only to their own result slot. If jobs throw, the exception of the
/// lowest failing index is rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

} // namespace resbench
