#pragma once

#include <exception>
#include <mutex>

#include <omp.h>

namespace hamlaw {

inline int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

/// Runs fn(i) for i in [0, count) on `workers` threads (0: OpenMP default). Results must be
/// written to per-index slots so the outcome does not depend on scheduling. The first
/// exception thrown by any fn is rethrown after the loop.
template <class Fn>
void parallel_for_trials(long count, int workers, Fn&& fn) {
    std::exception_ptr error;
    std::mutex mu;
#pragma omp parallel for schedule(dynamic) num_threads(resolve_workers(workers))
    for (long i = 0; i < count; ++i) {
        {
            std::lock_guard<std::mutex> lock(mu);
            if (error) continue;
        }
        try {
            fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace hamlaw
