#pragma once

#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gpquad {

/// Number of threads a job count resolves to (jobs <= 0 means all cores).
inline int resolve_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs <= 0) {
        return omp_get_max_threads();
    }
    return jobs;
#else
    (void)jobs;
    return 1;
#endif
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
///
/// Iterations must be independent and write only to their own output slots;
/// callers that need a canonical result order then aggregate the slots
/// sequentially, so the outcome does not depend on the thread count.
/// The first exception thrown by any iteration is rethrown to the caller.
template <typename F>
void parallel_for_index(int n, int jobs, F&& fn) {
    const int threads = resolve_jobs(jobs);
    if (threads == 1 || n <= 1) {
        for (int i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
#ifdef _OPENMP
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(gpquad_parallel_error)
            {
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
#else
    for (int i = 0; i < n; ++i) {
        fn(i);
    }
#endif
}

} // namespace gpquad
