#include "hyperproc/walks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hyperproc/errors.hpp"
#include "hyperproc/structure.hpp"

namespace hyperproc {

double BorelLaw::log_pmf(long long n) const {
    if (n < 1) throw DomainError("total progeny is at least 1");
    if (mean <= 0.0) return n == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double dn = static_cast<double>(n);
    return -mean * dn + (dn - 1.0) * std::log(mean * dn) - std::lgamma(dn + 1.0);
}

double BorelLaw::pmf(long long n) const {
    if (n == 1) return std::exp(-mean);  // (mu n)^{n-1} = 1, also valid at mu = 0
    return std::exp(log_pmf(n));
}

double BorelLaw::infinity_mass() const {
    if (mean <= 1.0) return 0.0;
    return largest_root_phi(0.5, mean, tolerance);  // 2 t rho2 = mu
}

double borel_pmf(double mu, long long n) { return BorelLaw{mu, 1e-12}.pmf(n); }

FirstPassage simulate_first_passage(double mu, long long step_cap, RngStream& rng) {
    if (step_cap < 1) throw DomainError("step cap must be >= 1");
    long long height = 1;
    for (long long n = 1; n <= step_cap; ++n) {
        height += rng.next_poisson(mu) - 1;
        if (height == 0) return {false, n};
    }
    return {true, step_cap};
}

long long default_step_cap(double mu) {
    const long long base = 10000;
    if (mu <= 1.0) return base;
    const double stretch = 50.0 * std::ceil(1.0 / ((mu - 1.0) * (mu - 1.0)));
    return std::max(base, static_cast<long long>(stretch));
}

std::optional<double> WalkFamily::first_escape_time() const {
    for (size_t i = 0; i < passage.size(); ++i) {
        if (passage[i].escaped) return time_grid[i];
    }
    return std::nullopt;
}

WalkFamily coupled_family(const std::vector<double>& time_grid, double rho2,
                          long long step_cap, RngStream& rng) {
    if (!(rho2 > 0.0)) throw DomainError("coupled family requires rho2 > 0");
    for (size_t i = 0; i < time_grid.size(); ++i) {
        if (time_grid[i] < 0.0 || (i > 0 && time_grid[i] <= time_grid[i - 1])) {
            throw DomainError("time grid must be positive and strictly increasing");
        }
    }
    const size_t r = time_grid.size();
    WalkFamily family{time_grid, rho2, step_cap, {}};
    family.passage.assign(r, {true, step_cap});

    std::vector<long long> height(r, 1);
    // Walks die in grid order (cumulative counts grow with t), so the live
    // ones always form a suffix.
    size_t first_live = 0;
    for (long long n = 1; n <= step_cap && first_live < r; ++n) {
        // One shared offspring process per step, read at each grid time.
        // The dead prefix never looks at its counts, so those arrivals are
        // folded into a single draw.
        long long cumulative =
            rng.next_poisson(2.0 * rho2 * time_grid[first_live]);
        for (size_t j = first_live; j < r; ++j) {
            if (j > first_live) {
                cumulative += rng.next_poisson(
                    2.0 * rho2 * (time_grid[j] - time_grid[j - 1]));
            }
            height[j] += cumulative - 1;
            if (height[j] == 0 && family.passage[j].escaped) {
                family.passage[j] = {false, n};
            }
        }
        while (first_live < r && !family.passage[first_live].escaped &&
               family.passage[first_live].steps <= n) {
            ++first_live;
        }
    }
    return family;
}

} // namespace hyperproc
