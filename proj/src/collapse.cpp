#include "hyperproc/collapse.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <string>

#include "hyperproc/errors.hpp"
#include "hyperproc/rng.hpp"

namespace hyperproc {

namespace {

// Flattened incidence view plus per-edge live-vertex bookkeeping. An edge
// with remaining == 1 is a patch and xor_acc holds its surviving vertex.
struct PeelState {
    std::vector<int> remaining;
    std::vector<VertexId> xor_acc;
    std::vector<int> incidence_offset;
    std::vector<int> incidence;
    std::vector<char> removed;

    explicit PeelState(const Hypergraph& h) {
        const int n = h.num_vertices();
        const auto& edges = h.edges();
        remaining.resize(edges.size());
        xor_acc.assign(edges.size(), 0);
        removed.assign(static_cast<size_t>(n), 0);
        incidence_offset.assign(static_cast<size_t>(n) + 1, 0);
        for (const auto& e : edges) {
            for (VertexId v : e) ++incidence_offset[static_cast<size_t>(v) + 1];
        }
        for (size_t v = 1; v < incidence_offset.size(); ++v) {
            incidence_offset[v] += incidence_offset[v - 1];
        }
        incidence.resize(static_cast<size_t>(incidence_offset.back()));
        std::vector<int> cursor(incidence_offset.begin(), incidence_offset.end() - 1);
        for (size_t label = 0; label < edges.size(); ++label) {
            remaining[label] = static_cast<int>(edges[label].size());
            for (VertexId v : edges[label]) {
                xor_acc[label] ^= v;
                incidence[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] =
                    static_cast<int>(label);
            }
        }
    }
};

} // namespace

CollapseResult collapse(const Hypergraph& h, std::optional<uint64_t> order_seed) {
    const int n = h.num_vertices();
    PeelState state(h);

    long long patches = 0;
    long long debris = 0;

    // Patch tokens: one entry per live cardinality-1 edge. token_pos maps an
    // edge label to its slot, enabling O(1) swap-removal when the token
    // turns to debris.
    std::vector<int> tokens;
    std::vector<int> token_pos(h.edges().size(), -1);
    auto add_token = [&](int label) {
        token_pos[static_cast<size_t>(label)] = static_cast<int>(tokens.size());
        tokens.push_back(label);
        ++patches;
    };
    auto drop_token = [&](int label) {
        const int pos = token_pos[static_cast<size_t>(label)];
        const int last = tokens.back();
        tokens[static_cast<size_t>(pos)] = last;
        token_pos[static_cast<size_t>(last)] = pos;
        tokens.pop_back();
        token_pos[static_cast<size_t>(label)] = -1;
        --patches;
    };

    // Deterministic order: lowest-index vertex currently carrying a patch.
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> pending;
    std::vector<int> vertex_patches(static_cast<size_t>(n), 0);

    const bool randomized = order_seed.has_value();
    std::optional<RngStream> rng;
    if (randomized) rng.emplace(*order_seed, 0);

    for (size_t label = 0; label < h.edges().size(); ++label) {
        if (state.remaining[label] == 0) {
            ++debris;
        } else if (state.remaining[label] == 1) {
            add_token(static_cast<int>(label));
            const VertexId v = state.xor_acc[label];
            if (++vertex_patches[static_cast<size_t>(v)] == 1) pending.push(v);
        }
    }

    CollapseTrace trace;
    trace.patch_counts.push_back(patches);
    trace.debris_counts.push_back(debris);

    while (patches > 0) {
        VertexId v;
        if (randomized) {
            const int token = tokens[static_cast<size_t>(rng->next_below(tokens.size()))];
            v = state.xor_acc[static_cast<size_t>(token)];
        } else {
            while (vertex_patches[static_cast<size_t>(pending.top())] == 0) pending.pop();
            v = pending.top();
        }

        state.removed[static_cast<size_t>(v)] = 1;
        const int begin = state.incidence_offset[static_cast<size_t>(v)];
        const int end = state.incidence_offset[static_cast<size_t>(v) + 1];
        for (int slot = begin; slot < end; ++slot) {
            const int label = state.incidence[static_cast<size_t>(slot)];
            int& rem = state.remaining[static_cast<size_t>(label)];
            if (rem == 1) {
                // A patch sitting on v; it empties out.
                rem = 0;
                drop_token(label);
                ++debris;
            } else {
                --rem;
                state.xor_acc[static_cast<size_t>(label)] ^= v;
                if (rem == 1) {
                    add_token(label);
                    const VertexId u = state.xor_acc[static_cast<size_t>(label)];
                    if (++vertex_patches[static_cast<size_t>(u)] == 1) pending.push(u);
                }
            }
        }
        vertex_patches[static_cast<size_t>(v)] = 0;

        trace.chosen.push_back(v);
        trace.patch_counts.push_back(patches);
        trace.debris_counts.push_back(debris);
    }

    CollapseResult result;
    result.identifiable_mask = state.removed;
    for (VertexId v = 0; v < n; ++v) {
        if (state.removed[static_cast<size_t>(v)]) result.identifiable_vertices.push_back(v);
    }
    result.residual = Hypergraph(n);
    for (const auto& e : h.edges()) {
        std::vector<VertexId> kept;
        kept.reserve(e.size());
        for (VertexId v : e) {
            if (!state.removed[static_cast<size_t>(v)]) kept.push_back(v);
        }
        if (kept.empty()) {
            ++result.identifiable_edge_count;
        } else {
            result.residual.insert_edge(std::move(kept));
        }
    }
    assert(result.identifiable_edge_count == debris);
    result.trace = std::move(trace);
    return result;
}

DomainResult domain_of(const Hypergraph& h, VertexId v0) {
    if (v0 < 0 || v0 >= h.num_vertices()) {
        throw InvalidVertex("root vertex " + std::to_string(v0) + " outside [0," +
                            std::to_string(h.num_vertices()) + ")");
    }
    if (h.patch_count() > 0) {
        throw PatchesPresent("domain is defined for patch-free hypergraphs only");
    }
    Hypergraph augmented = h;
    augmented.insert_edge({v0});
    CollapseResult collapsed = collapse(augmented);
    // The marker patch always empties out; it is not an edge of h.
    return {std::move(collapsed.identifiable_vertices),
            collapsed.identifiable_edge_count - 1};
}

namespace {

void require_multigraph(const Hypergraph& g) {
    for (const auto& e : g.edges()) {
        if (e.size() != 2) {
            throw NotAGraph("2-core requires all edges to have cardinality 2");
        }
    }
}

} // namespace

std::vector<VertexId> two_core_by_peeling(const Hypergraph& g) {
    const int n = g.num_vertices();
    require_multigraph(g);
    std::vector<int> degree(static_cast<size_t>(n), 0);
    for (const auto& e : g.edges()) {
        ++degree[static_cast<size_t>(e[0])];
        ++degree[static_cast<size_t>(e[1])];
    }
    PeelState state(g);
    std::queue<VertexId> leaves;
    for (VertexId v = 0; v < n; ++v) {
        if (degree[static_cast<size_t>(v)] == 1) leaves.push(v);
    }
    std::vector<char> edge_alive(g.edges().size(), 1);
    while (!leaves.empty()) {
        const VertexId v = leaves.front();
        leaves.pop();
        if (degree[static_cast<size_t>(v)] != 1) continue;
        const int begin = state.incidence_offset[static_cast<size_t>(v)];
        const int end = state.incidence_offset[static_cast<size_t>(v) + 1];
        for (int slot = begin; slot < end; ++slot) {
            const int label = state.incidence[static_cast<size_t>(slot)];
            if (!edge_alive[static_cast<size_t>(label)]) continue;
            edge_alive[static_cast<size_t>(label)] = 0;
            const auto& e = g.edge(label);
            const VertexId u = e[0] == v ? e[1] : e[0];
            --degree[static_cast<size_t>(v)];
            --degree[static_cast<size_t>(u)];
            if (degree[static_cast<size_t>(u)] == 1) leaves.push(u);
            break;  // exactly one incident edge per peel step
        }
    }
    std::vector<VertexId> peeled_core;
    for (VertexId v = 0; v < n; ++v) {
        if (degree[static_cast<size_t>(v)] >= 2) peeled_core.push_back(v);
    }
    return peeled_core;
}

std::vector<VertexId> two_core_by_dual_collapse(const Hypergraph& g) {
    require_multigraph(g);
    const Hypergraph dual_graph = g.dual();
    const CollapseResult dual_collapsed = collapse(dual_graph);
    std::vector<VertexId> core;
    const auto& dual_edges = dual_graph.edges();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        bool all_removed = true;
        for (int label : dual_edges[static_cast<size_t>(v)]) {
            if (!dual_collapsed.identifiable_mask[static_cast<size_t>(label)]) {
                all_removed = false;
                break;
            }
        }
        if (!all_removed) core.push_back(v);
    }
    return core;
}

std::vector<VertexId> two_core(const Hypergraph& g) {
    std::vector<VertexId> peeled = two_core_by_peeling(g);
    if (peeled != two_core_by_dual_collapse(g)) {
        throw std::logic_error("2-core routes disagree (peel vs dual collapse)");
    }
    return peeled;
}

} // namespace hyperproc
