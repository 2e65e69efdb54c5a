#pragma once

// Trial-level parallelism. A worker accumulates integer statistics for the
// trials it is handed; workers are merged afterwards. Integer merges are
// exact and commutative, so the parallel result is identical to the serial
// reference regardless of scheduling.

#include <cstdint>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace revealment {

enum class Execution { serial, parallel };

inline int worker_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Serial reference: one worker sees trials 0..trials-1 in order.
template <class Factory>
auto run_trials_serial(std::uint64_t trials, Factory make) {
    auto total = make();
    for (std::uint64_t t = 0; t < trials; ++t) total(t);
    return total;
}

/// `make()` builds a worker with `operator()(std::uint64_t trial)` and
/// `merge(const Worker&)`. The first exception thrown by any trial is rethrown.
template <class Factory>
auto run_trials(std::uint64_t trials, Factory make, Execution exec = Execution::parallel) {
#ifdef _OPENMP
    if (exec == Execution::serial || trials < 2 || omp_get_max_threads() < 2) {
        return run_trials_serial(trials, make);
    }
    auto total = make();
    std::exception_ptr failure;
    std::mutex lock;
#pragma omp parallel
    {
        auto local = make();
        const auto count = static_cast<std::int64_t>(trials);
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t t = 0; t < count; ++t) {
            try {
                local(static_cast<std::uint64_t>(t));
            } catch (...) {
                std::lock_guard guard(lock);
                if (!failure) failure = std::current_exception();
            }
        }
        std::lock_guard guard(lock);
        total.merge(local);
    }
    if (failure) std::rethrow_exception(failure);
    return total;
#else
    (void)exec;
    return run_trials_serial(trials, make);
#endif
}

}  // namespace revealment
