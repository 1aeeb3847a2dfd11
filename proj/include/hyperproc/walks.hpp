#ifndef HYPERPROC_WALKS_HPP
#define HYPERPROC_WALKS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperproc/rng.hpp"

namespace hyperproc {

// Total-progeny law of a branching process with one ancestor and
// Poisson(mu) offspring (the Borel distribution):
//   P(M = n) = e^{-mu n} (mu n)^{n-1} / n!,  n >= 1,
// with the remaining mass P(M = infinity) equal to the largest root of
// mu x + log(1-x) = 0 when mu > 1.
struct BorelLaw {
    double mean;       // offspring mean mu
    double tolerance;  // root refinement for the infinite mass

    double pmf(long long n) const;
    double log_pmf(long long n) const;
    double infinity_mass() const;
};

double borel_pmf(double mu, long long n);

// First passage to zero of the walk xi_0 = 1, xi_{n+1} = xi_n - 1 +
// Poisson(mu). Walks still alive after step_cap steps are reported as
// escaped, the operational stand-in for an infinite passage time.
struct FirstPassage {
    bool escaped;
    long long steps;  // meaningful when !escaped
};

FirstPassage simulate_first_passage(double mu, long long step_cap, RngStream& rng);

// Default barrier: 1e4 steps, stretched near criticality where
// conditioned-to-die walks linger longest.
long long default_step_cap(double mu);

// One realization of the walk family {xi_t(n)} driven by shared Poisson
// processes of rate 2 rho2: the walk at time t uses the cumulative counts
// at t, so passage times are non-decreasing along the grid.
struct WalkFamily {
    std::vector<double> time_grid;
    double rho2 = 0.0;
    long long step_cap = 0;
    std::vector<FirstPassage> passage;  // per grid time

    // First grid time whose walk escaped, if any.
    std::optional<double> first_escape_time() const;
};

WalkFamily coupled_family(const std::vector<double>& time_grid, double rho2,
                          long long step_cap, RngStream& rng);

} // namespace hyperproc

#endif
