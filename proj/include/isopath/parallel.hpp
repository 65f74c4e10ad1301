#pragma once

#include <cstddef>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isopath {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path kept for testing; Parallel uses OpenMP when compiled in.
enum class Execution { Serial, Parallel };

/// Applies `fn(i)` for i in [0, n). Results must be written to independent
/// slots so serial and parallel runs are bit-identical.
template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
#ifdef _OPENMP
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Caps OpenMP parallelism from the ISOPATH_THREADS environment variable.
inline void apply_thread_limit_from_env() {
#ifdef _OPENMP
    if (const char* s = std::getenv("ISOPATH_THREADS")) {
        int n = std::atoi(s);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

} // namespace isopath
