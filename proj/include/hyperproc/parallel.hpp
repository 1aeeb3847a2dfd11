#ifndef HYPERPROC_PARALLEL_HPP
#define HYPERPROC_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hyperproc {

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(trial_index) for every index in [0, trials). Each trial must
// derive its randomness from its index and write only to its own output
// slots; under that contract the parallel schedule and the serial
// reference loop produce identical results, which the tests assert.
template <typename Fn>
void run_trials(long long trials, bool parallel, Fn&& fn) {
#ifdef _OPENMP
    if (parallel && trials > 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < trials; ++i) {
            fn(i);
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (long long i = 0; i < trials; ++i) {
        fn(i);
    }
}

} // namespace hyperproc

#endif
