#pragma once

#include <cstddef>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bpir {

/// Execution policy for the data-parallel kernels (per-block scans,
/// per-database answer evaluation, audit sampling). `Serial` is the
/// reference implementation; results must be identical under both.
enum class Exec { Serial, Parallel };

/// Runs body(i) for i in [0, count). Under Exec::Parallel the iterations
/// are distributed across OpenMP threads; every iteration must write only
/// to its own output slot so the merged result is order-independent.
/// An exception thrown by any iteration is rethrown on the calling thread
/// (exceptions must not escape an OpenMP region).
template <class F>
void parallel_for(Exec mode, std::size_t count, F&& body) {
#ifdef _OPENMP
    if (mode == Exec::Parallel && count > 1) {
        std::exception_ptr first_error = nullptr;
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
                #pragma omp critical(bpir_parallel_for_error)
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < count; ++i) {
        body(i);
    }
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace bpir
