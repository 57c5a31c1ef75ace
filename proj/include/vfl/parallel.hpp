#pragma once

#include <cstddef>
#include <functional>

namespace vfl {

// Data-parallel kernels write disjoint slots indexed by i; reductions over
// the slots happen serially in index order afterwards, so parallel and serial
// runs produce bit-identical results for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Serial reference loop, kept for testing and benchmarking against the
// OpenMP path.
void serial_for(std::size_t count, const std::function<void(std::size_t)>& body);

bool openmp_enabled();
int thread_count();

} // namespace vfl
