#include "hyperproc/chain.hpp"

#include <cmath>

#include "hyperproc/errors.hpp"

namespace hyperproc {

namespace {

double log_choose(double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

} // namespace

double lambda2(const MixingDistribution& rho, long long num_vertices, long long n) {
    if (num_vertices < 2 || n < 0 || n >= num_vertices) {
        throw DomainError("lambda2 requires 0 <= n < N");
    }
    const double dn = static_cast<double>(num_vertices);
    double sum = 0.0;
    const int k_max = rho.max_cardinality();
    for (int i = 0; i + 2 <= k_max && i <= n; ++i) {
        const double r = rho.coeff(i + 2);
        if (r == 0.0) continue;
        sum += r * std::exp(log_choose(static_cast<double>(n), static_cast<double>(i)) -
                            log_choose(dn, static_cast<double>(i) + 2.0));
    }
    return dn * sum;
}

ChainState chain_step(const ChainState& state, const MixingDistribution& rho,
                      RngStream& rng) {
    if (state.stopped()) throw ChainStopped("patch count is zero");
    if (state.step >= state.num_vertices) {
        throw DomainError("chain exhausted its vertex budget");
    }
    const long long remaining = state.num_vertices - state.step;
    const long long other_patches =
        rng.next_binomial(state.patches - 1, 1.0 / static_cast<double>(remaining));
    const double pair_rate =
        static_cast<double>(remaining - 1) * state.time *
        lambda2(rho, state.num_vertices, state.step);
    const long long new_patches = rng.next_poisson(pair_rate);

    ChainState next = state;
    next.step = state.step + 1;
    next.debris = state.debris + 1 + other_patches;
    next.patches = state.patches - 1 - other_patches + new_patches;
    return next;
}

} // namespace hyperproc
