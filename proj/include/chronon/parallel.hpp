#ifndef CHRONON_PARALLEL_HPP
#define CHRONON_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace chronon {

/// Worker count: CHRONON_THREADS if set to a positive integer, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited exactly once;
/// callers write results into preallocated slots so output order never depends on workers.
/// The first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace chronon

#endif  // CHRONON_PARALLEL_HPP
