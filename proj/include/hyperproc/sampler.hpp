#ifndef HYPERPROC_SAMPLER_HPP
#define HYPERPROC_SAMPLER_HPP

#include <cstdint>
#include <vector>

#include "hyperproc/hypergraph.hpp"
#include "hyperproc/mixing.hpp"
#include "hyperproc/rng.hpp"

namespace hyperproc {

// Random hypergraph whose multiplicity at each subset A is an independent
// Poisson with mean N * beta_{|A|} / C(N,|A|). Sampled by cardinality:
// Poisson(N * beta_k) edges of size k, each a uniform k-subset. Coefficients
// with k > N are ignored.
Hypergraph sample_static(const MixingDistribution& beta, int num_vertices,
                         uint64_t seed);
Hypergraph sample_static(const MixingDistribution& beta, int num_vertices,
                         RngStream& rng);

// Rate-N arrival stream on [0, horizon]; each event draws a cardinality K
// from the mixture and a uniform K-subset. Events with K > N keep their
// arrival time but carry no edge.
struct EventStream {
    struct Event {
        double time;
        int cardinality;
        std::vector<VertexId> vertices;  // empty when cardinality > N
    };

    int num_vertices = 0;
    double horizon = 0.0;
    uint64_t seed = 0;
    std::vector<Event> events;  // strictly increasing times
};

EventStream sample_process(const MixingDistribution& rho, int num_vertices,
                           double horizon, uint64_t seed);
EventStream sample_process(const MixingDistribution& rho, int num_vertices,
                           double horizon, RngStream& rng);

// Hypergraph of all edges that arrived by time t.
Hypergraph snapshot_at(const EventStream& stream, double t);

struct PathPoint {
    double time;
    double vertex_fraction;  // identifiable vertices / N
    double edge_fraction;    // identifiable edges / N
};

// Rescaled identifiable counts at each grid time, maintained incrementally:
// each arriving edge is projected onto the surviving vertices and any patch
// it creates is peeled immediately. Equals a from-scratch collapse of every
// snapshot.
std::vector<PathPoint> identifiability_path(const EventStream& stream,
                                            const std::vector<double>& grid);

} // namespace hyperproc

#endif
