#ifndef STOCHDISS_PARALLEL_HPP
#define STOCHDISS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace stochdiss {

/// STOCHDISS_WORKERS if set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
std::size_t default_worker_count();

/// Runs task(i) for i in [0, n) on up to `workers` threads. Tasks are pulled
/// dynamically; callers place results by index. If any task throws, the
/// exception of the lowest failing index is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace stochdiss

#endif  // STOCHDISS_PARALLEL_HPP
