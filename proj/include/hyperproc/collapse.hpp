#ifndef HYPERPROC_COLLAPSE_HPP
#define HYPERPROC_COLLAPSE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperproc/hypergraph.hpp"

namespace hyperproc {

// Step-by-step record of one collapse run. patch_counts[n] and
// debris_counts[n] are the totals after n steps (index 0 is the input
// state); chosen[n] is the vertex removed at step n+1. The run stops at the
// first step where the patch count hits zero.
struct CollapseTrace {
    std::vector<VertexId> chosen;
    std::vector<long long> patch_counts;
    std::vector<long long> debris_counts;

    int stop_index() const { return static_cast<int>(chosen.size()); }
};

struct CollapseResult {
    std::vector<VertexId> identifiable_vertices;  // sorted
    std::vector<char> identifiable_mask;          // size num_vertices
    long long identifiable_edge_count = 0;        // edges inside the removed set
    Hypergraph residual;                          // patch-free, emptied edges dropped
    CollapseTrace trace;
};

// Repeatedly removes a patched vertex until no edge of cardinality 1
// remains. Without a seed the lowest-index patched vertex is taken each
// step; with a seed the next patch is chosen uniformly among all patch
// tokens (so a vertex is picked with probability proportional to its patch
// count). The identifiable set and edge count do not depend on the order;
// only the trace does.
CollapseResult collapse(const Hypergraph& h,
                        std::optional<uint64_t> order_seed = std::nullopt);

struct DomainResult {
    std::vector<VertexId> vertices;       // sorted; always contains the root
    long long identifiable_edge_count;    // edges of h inside the domain (marker excluded)
};

// Identifiable set of h + {v0} for a patch-free h. Throws PatchesPresent
// if h already has a patch.
DomainResult domain_of(const Hypergraph& h, VertexId v0);

// 2-core of a multigraph (every edge must have cardinality 2). Route (a)
// peels edges at degree-1 vertices; route (b) collapses the dual and keeps
// the vertices whose dual edge is not identifiable. two_core runs both and
// requires exact agreement. All return the sorted core vertex set.
std::vector<VertexId> two_core_by_peeling(const Hypergraph& g);
std::vector<VertexId> two_core_by_dual_collapse(const Hypergraph& g);
std::vector<VertexId> two_core(const Hypergraph& g);

} // namespace hyperproc

#endif
