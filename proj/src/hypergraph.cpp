#include "hyperproc/hypergraph.hpp"

#include <algorithm>
#include <string>

#include "hyperproc/errors.hpp"

namespace hyperproc {

Hypergraph::Hypergraph(int num_vertices) : num_vertices_(num_vertices) {
    if (num_vertices < 0) throw InvalidVertex("negative vertex count");
}

void Hypergraph::insert_edge(std::vector<VertexId> vertices) {
    std::sort(vertices.begin(), vertices.end());
    for (size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i] < 0 || vertices[i] >= num_vertices_) {
            throw InvalidVertex("vertex " + std::to_string(vertices[i]) +
                                " outside [0," + std::to_string(num_vertices_) + ")");
        }
        if (i > 0 && vertices[i] == vertices[i - 1]) {
            throw InvalidVertex("repeated vertex " + std::to_string(vertices[i]) +
                                " in edge");
        }
    }
    edges_.push_back(std::move(vertices));
}

int Hypergraph::multiplicity(const std::vector<VertexId>& subset) const {
    int count = 0;
    for (const auto& e : edges_) {
        if (e == subset) ++count;
    }
    return count;
}

std::map<std::vector<VertexId>, int> Hypergraph::multiplicity_map() const {
    std::map<std::vector<VertexId>, int> m;
    for (const auto& e : edges_) ++m[e];
    return m;
}

long long Hypergraph::patch_count() const {
    long long count = 0;
    for (const auto& e : edges_) count += e.size() == 1;
    return count;
}

long long Hypergraph::debris_count() const {
    long long count = 0;
    for (const auto& e : edges_) count += e.empty();
    return count;
}

Hypergraph Hypergraph::restricted(const std::vector<VertexId>& removed) const {
    std::vector<char> drop(static_cast<size_t>(num_vertices_), 0);
    for (VertexId v : removed) {
        if (v < 0 || v >= num_vertices_) {
            throw InvalidVertex("vertex " + std::to_string(v) + " outside [0," +
                                std::to_string(num_vertices_) + ")");
        }
        drop[static_cast<size_t>(v)] = 1;
    }
    Hypergraph out(num_vertices_);
    out.edges_.reserve(edges_.size());
    for (const auto& e : edges_) {
        std::vector<VertexId> kept;
        kept.reserve(e.size());
        for (VertexId v : e) {
            if (!drop[static_cast<size_t>(v)]) kept.push_back(v);
        }
        out.edges_.push_back(std::move(kept));
    }
    return out;
}

Hypergraph Hypergraph::dual() const {
    Hypergraph out(edge_count());
    out.edges_.assign(static_cast<size_t>(num_vertices_), {});
    for (int label = 0; label < edge_count(); ++label) {
        for (VertexId v : edges_[static_cast<size_t>(label)]) {
            out.edges_[static_cast<size_t>(v)].push_back(label);
        }
    }
    // Labels were visited in increasing order, so dual edges are sorted.
    return out;
}

Hypergraph Hypergraph::simplified() const {
    Hypergraph out(num_vertices_);
    std::map<std::vector<VertexId>, int> seen;
    for (const auto& e : edges_) {
        if (seen.emplace(e, 1).second) out.edges_.push_back(e);
    }
    return out;
}

} // namespace hyperproc
