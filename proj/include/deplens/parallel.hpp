#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace deplens {

/// Worker cap taken from DEPLENS_THREADS (unset or invalid: OpenMP default).
/// Applies the cap to the OpenMP runtime and returns the effective count.
int configure_threads_from_env();

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline int thread_index() {
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace deplens
