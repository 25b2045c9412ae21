#ifndef KRONMIX_PARALLEL_HPP
#define KRONMIX_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace kronmix {

/// Worker count: KRONMIX_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) over up to worker_count() threads.
/// Indices are split into contiguous blocks; body must only write state owned
/// by index i. The first exception thrown by any worker is rethrown.
/// Calls made from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace kronmix

#endif  // KRONMIX_PARALLEL_HPP
