#include "vfl/parallel.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vfl {

void serial_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
#ifdef _OPENMP
    const std::int64_t n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
#else
    serial_for(count, body);
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace vfl
