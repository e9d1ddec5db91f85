#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace icd::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Parallel loop over [0, n). Each index must write only its own slots; results
/// are then independent of the schedule and bitwise reproducible.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        f(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

/// Serial twin of parallel_for, kept as the reference path for tests and the
/// kernel benchmark.
template <class F>
void serial_for(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace icd::par
