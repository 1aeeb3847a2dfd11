#ifndef HYPERPROC_CHAIN_HPP
#define HYPERPROC_CHAIN_HPP

#include "hyperproc/mixing.hpp"
#include "hyperproc/rng.hpp"

namespace hyperproc {

// State of the randomized-collapse counting chain on a Poisson(t rho)
// hypergraph with N vertices: after `step` vertex removals there are
// `patches` cardinality-1 edges and `debris` emptied edges. The chain is
// frozen once patches reaches zero.
struct ChainState {
    long long step = 0;
    long long patches = 0;
    long long debris = 0;
    long long num_vertices = 0;
    double time = 0.0;

    bool stopped() const { return patches == 0; }
};

// Rate at which a fixed pair of surviving vertices is covered by a current
// cardinality-2 edge after n removals:
//   lambda2(N,n) = N sum_i rho_{2+i} C(n,i) / C(N,i+2).
double lambda2(const MixingDistribution& rho, long long num_vertices, long long n);

// One transition: remove the vertex under a uniformly chosen patch token.
// W ~ Binomial(patches-1, 1/(N-n)) other patches on that vertex empty out,
// and U ~ Poisson((N-n-1) t lambda2(N,n)) pair edges through it become new
// patches. Throws ChainStopped when no patch remains.
ChainState chain_step(const ChainState& state, const MixingDistribution& rho,
                      RngStream& rng);

} // namespace hyperproc

#endif
