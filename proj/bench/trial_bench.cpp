// Compares the serial reference trial loop against the OpenMP-parallel one
// on representative workloads and checks that both produce identical
// aggregates.

#include <chrono>
#include <cstdio>
#include <vector>

#include "hyperproc/collapse.hpp"
#include "hyperproc/parallel.hpp"
#include "hyperproc/rng.hpp"
#include "hyperproc/sampler.hpp"
#include "hyperproc/structure.hpp"
#include "hyperproc/walks.hpp"

using namespace hyperproc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Workload {
    const char* name;
    long long trials;
    long long (*run_trial)(long long);
};

long long domain_trial(long long i) {
    static const MixingDistribution rho = MixingDistribution::probability({0.0, 1.0});
    RngStream rng(1001, static_cast<uint64_t>(i));
    const Hypergraph h = sample_static(rho.scaled(0.25), 20000, rng);
    return static_cast<long long>(domain_of(h, 0).vertices.size());
}

long long collapse_trial(long long i) {
    static const MixingDistribution rho = MixingDistribution::probability({0.5, 0.5});
    RngStream rng(1002, static_cast<uint64_t>(i));
    const Hypergraph h = sample_static(rho.scaled(1.0), 50000, rng);
    return static_cast<long long>(collapse(h).identifiable_vertices.size());
}

long long walk_trial(long long i) {
    RngStream rng(1003, static_cast<uint64_t>(i));
    const WalkFamily family =
        coupled_family({0.3, 0.5, 0.8, 1.0, 1.5}, 1.0, 10000, rng);
    long long sum = 0;
    for (const auto& fp : family.passage) sum += fp.escaped ? -1 : fp.steps;
    return sum;
}

} // namespace

int main() {
    std::printf("threads available: %d\n", hardware_threads());
    const std::vector<Workload> workloads{
        {"domain queries   (N=2e4)", 400, domain_trial},
        {"full collapses  (N=5e4)", 200, collapse_trial},
        {"coupled walks (5 times)", 20000, walk_trial},
    };
    for (const auto& w : workloads) {
        std::vector<long long> serial_out(static_cast<size_t>(w.trials));
        std::vector<long long> parallel_out(static_cast<size_t>(w.trials));

        auto start = Clock::now();
        run_trials(w.trials, false, [&](long long i) {
            serial_out[static_cast<size_t>(i)] = w.run_trial(i);
        });
        const double serial_s = seconds_since(start);

        start = Clock::now();
        run_trials(w.trials, true, [&](long long i) {
            parallel_out[static_cast<size_t>(i)] = w.run_trial(i);
        });
        const double parallel_s = seconds_since(start);

        const bool identical = serial_out == parallel_out;
        std::printf("%-26s serial %7.3fs  parallel %7.3fs  speedup %4.2fx  %s\n",
                    w.name, serial_s, parallel_s, serial_s / parallel_s,
                    identical ? "results identical" : "RESULTS DIFFER");
    }
    return 0;
}
