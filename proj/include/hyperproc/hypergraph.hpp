#ifndef HYPERPROC_HYPERGRAPH_HPP
#define HYPERPROC_HYPERGRAPH_HPP

#include <map>
#include <vector>

namespace hyperproc {

using VertexId = int;

// Labelled multiset hypergraph on vertices {0,..,num_vertices-1}.
// Edges are stored in insertion order; the position in the edge list is the
// label. Each edge is a strictly increasing vertex list; the empty list is
// allowed and represents debris. The multiplicity map (subset -> count) is
// derived, not stored.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(int num_vertices);

    int num_vertices() const { return num_vertices_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::vector<VertexId>>& edges() const { return edges_; }
    const std::vector<VertexId>& edge(int label) const { return edges_[static_cast<size_t>(label)]; }

    // Adds one labelled edge. The vertex set is canonicalized (sorted);
    // out-of-range or repeated vertices throw InvalidVertex.
    void insert_edge(std::vector<VertexId> vertices);

    // Number of labels whose edge equals the given (sorted) subset.
    int multiplicity(const std::vector<VertexId>& subset) const;

    // Full multiplicity map, for tests and small instances.
    std::map<std::vector<VertexId>, int> multiplicity_map() const;

    long long patch_count() const;   // edges of cardinality 1
    long long debris_count() const;  // empty edges

    // Hypergraph after deleting the given vertices: every edge B becomes
    // B \ S, labels preserved (edges may become empty).
    Hypergraph restricted(const std::vector<VertexId>& removed) const;

    // Transpose of the vertex-edge incidence relation: one vertex per
    // original edge label, one edge per original vertex listing the labels
    // through it. Isolated vertices yield empty dual edges.
    Hypergraph dual() const;

    // Multiplicities capped at one; first label of each distinct subset
    // survives, in label order.
    Hypergraph simplified() const;

    bool operator==(const Hypergraph& other) const = default;

private:
    int num_vertices_ = 0;
    std::vector<std::vector<VertexId>> edges_;
};

} // namespace hyperproc

#endif
