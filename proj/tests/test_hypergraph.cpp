#include <doctest.h>

#include <sstream>

#include "hyperproc/errors.hpp"
#include "hyperproc/hypergraph.hpp"
#include "hyperproc/io.hpp"
#include "hyperproc/rng.hpp"

using namespace hyperproc;

namespace {

Hypergraph random_hypergraph(RngStream& rng, int max_vertices, double edge_mean,
                             int max_cardinality) {
    const int n = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(max_vertices)));
    Hypergraph h(n);
    const long long edges = rng.next_poisson(edge_mean);
    for (long long i = 0; i < edges; ++i) {
        const int k = static_cast<int>(
            rng.next_below(static_cast<uint64_t>(std::min(n, max_cardinality)) + 1));
        h.insert_edge(rng.next_subset(n, k));
    }
    return h;
}

} // namespace

TEST_CASE("insert canonicalizes and validates") {
    Hypergraph h(3);
    h.insert_edge({2, 0, 1});
    CHECK(h.edge(0) == std::vector<VertexId>{0, 1, 2});

    h.insert_edge({0, 1});
    h.insert_edge({1, 0});
    CHECK(h.multiplicity({0, 1}) == 2);

    h.insert_edge({});
    CHECK(h.debris_count() == 1);

    CHECK_THROWS_AS(h.insert_edge({3}), InvalidVertex);
    CHECK_THROWS_AS(h.insert_edge({-1}), InvalidVertex);
    CHECK_THROWS_AS(h.insert_edge({1, 1}), InvalidVertex);
    CHECK(h.edge_count() == 4);
}

TEST_CASE("restriction removes vertices and keeps labels") {
    Hypergraph h(3);
    h.insert_edge({0, 1});
    h.insert_edge({1, 2});
    const Hypergraph r = h.restricted({1});
    REQUIRE(r.edge_count() == 2);
    CHECK(r.edge(0) == std::vector<VertexId>{0});
    CHECK(r.edge(1) == std::vector<VertexId>{2});

    Hypergraph pair(2);
    pair.insert_edge({0, 1});
    const Hypergraph gone = pair.restricted({0, 1});
    REQUIRE(gone.edge_count() == 1);
    CHECK(gone.edge(0).empty());
    CHECK(gone.debris_count() == 1);

    Hypergraph doubled(2);
    doubled.insert_edge({0, 1});
    doubled.insert_edge({0, 1});
    CHECK(doubled.restricted({0}).multiplicity({1}) == 2);

    CHECK_THROWS_AS(h.restricted({7}), InvalidVertex);
}

TEST_CASE("restriction composes over disjoint vertex sets") {
    RngStream rng(11, 0);
    for (int it = 0; it < 60; ++it) {
        const Hypergraph h = random_hypergraph(rng, 12, 6.0, 4);
        const int n = h.num_vertices();
        std::vector<VertexId> s1, s2;
        for (VertexId v = 0; v < n; ++v) {
            const auto roll = rng.next_below(3);
            if (roll == 0) s1.push_back(v);
            if (roll == 1) s2.push_back(v);
        }
        std::vector<VertexId> both = s1;
        both.insert(both.end(), s2.begin(), s2.end());
        CHECK(h.restricted(s1).restricted(s2) == h.restricted(both));
    }
}

TEST_CASE("dual transposes the incidence relation") {
    Hypergraph h(3);
    h.insert_edge({0, 1});
    h.insert_edge({1, 2});
    const Hypergraph d = h.dual();
    CHECK(d.num_vertices() == 2);
    REQUIRE(d.edge_count() == 3);
    CHECK(d.edge(0) == std::vector<VertexId>{0});
    CHECK(d.edge(1) == std::vector<VertexId>{0, 1});
    CHECK(d.edge(2) == std::vector<VertexId>{1});

    const Hypergraph empty(4);
    const Hypergraph de = empty.dual();
    CHECK(de.num_vertices() == 0);
    CHECK(de.edge_count() == 4);
    for (int i = 0; i < 4; ++i) CHECK(de.edge(i).empty());
}

TEST_CASE("dual is an involution") {
    RngStream rng(12, 0);
    for (int it = 0; it < 40; ++it) {
        const Hypergraph h = random_hypergraph(rng, 10, 5.0, 4);
        CHECK(h.dual().dual() == h);
    }
}

TEST_CASE("simplify caps multiplicities at one") {
    Hypergraph h(2);
    h.insert_edge({0});
    h.insert_edge({0});
    h.insert_edge({0, 1});
    const Hypergraph s = h.simplified();
    REQUIRE(s.edge_count() == 2);
    CHECK(s.edge(0) == std::vector<VertexId>{0});
    CHECK(s.edge(1) == std::vector<VertexId>{0, 1});
    CHECK(s.simplified() == s);
}

TEST_CASE("text serialization round-trips, blank line is debris") {
    Hypergraph h(4);
    h.insert_edge({0, 2});
    h.insert_edge({});
    h.insert_edge({1, 2, 3});
    const std::string text = to_text(h);
    CHECK(text == "N 4\n0 2\n\n1 2 3\n");
    CHECK(hypergraph_from_text(text) == h);
}

TEST_CASE("json serialization round-trips") {
    Hypergraph h(3);
    h.insert_edge({0, 1});
    h.insert_edge({});
    const nlohmann::json j = to_json(h);
    CHECK(j["n"] == 3);
    CHECK(j["edges"].size() == 2);
    CHECK(hypergraph_from_json(j) == h);
}
