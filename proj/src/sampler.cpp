#include "hyperproc/sampler.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "hyperproc/errors.hpp"
#include "hyperproc/rng.hpp"

namespace hyperproc {

Hypergraph sample_static(const MixingDistribution& beta, int num_vertices,
                         uint64_t seed) {
    RngStream rng(seed, 0);
    return sample_static(beta, num_vertices, rng);
}

Hypergraph sample_static(const MixingDistribution& beta, int num_vertices,
                         RngStream& rng) {
    if (num_vertices < 1) throw DomainError("sample_static requires N >= 1");
    Hypergraph h(num_vertices);
    const int k_max = std::min(beta.max_cardinality(), num_vertices);
    for (int k = 1; k <= k_max; ++k) {
        const double rate = static_cast<double>(num_vertices) * beta.coeff(k);
        const long long count = rng.next_poisson(rate);
        for (long long i = 0; i < count; ++i) {
            h.insert_edge(rng.next_subset(num_vertices, k));
        }
    }
    return h;
}

EventStream sample_process(const MixingDistribution& rho, int num_vertices,
                           double horizon, uint64_t seed) {
    RngStream rng(seed, 0);
    EventStream stream = sample_process(rho, num_vertices, horizon, rng);
    stream.seed = seed;
    return stream;
}

EventStream sample_process(const MixingDistribution& rho, int num_vertices,
                           double horizon, RngStream& rng) {
    if (!rho.is_probability()) {
        throw DomainError("process sampling requires a probability mixture");
    }
    if (num_vertices < 1 || !(horizon > 0.0)) {
        throw DomainError("process sampling requires N >= 1 and horizon > 0");
    }
    EventStream stream;
    stream.num_vertices = num_vertices;
    stream.horizon = horizon;
    const std::vector<double> cdf = rho.cardinality_cdf();
    double t = 0.0;
    for (;;) {
        t += rng.next_exponential(static_cast<double>(num_vertices));
        if (t > horizon) break;
        const int k = rng.next_from_cdf(cdf) + 1;
        EventStream::Event event;
        event.time = t;
        event.cardinality = k;
        if (k <= num_vertices) event.vertices = rng.next_subset(num_vertices, k);
        stream.events.push_back(std::move(event));
    }
    return stream;
}

Hypergraph snapshot_at(const EventStream& stream, double t) {
    if (t < 0.0 || t > stream.horizon) {
        throw DomainError("snapshot time " + std::to_string(t) +
                          " outside [0, horizon]");
    }
    Hypergraph h(stream.num_vertices);
    for (const auto& event : stream.events) {
        if (event.time > t) break;
        if (event.cardinality <= stream.num_vertices) {
            h.insert_edge(event.vertices);
        }
    }
    return h;
}

namespace {

// Online peeling over a growing edge set. Vertices removed so far stay
// removed; each new edge is stored with its surviving vertices only.
class IncrementalCollapse {
public:
    explicit IncrementalCollapse(int num_vertices)
        : removed_(static_cast<size_t>(num_vertices), 0),
          incidence_(static_cast<size_t>(num_vertices)) {}

    void add_edge(const std::vector<VertexId>& vertices) {
        int rem = 0;
        VertexId acc = 0;
        const int label = static_cast<int>(remaining_.size());
        for (VertexId v : vertices) {
            if (!removed_[static_cast<size_t>(v)]) {
                ++rem;
                acc ^= v;
            }
        }
        remaining_.push_back(rem);
        xor_acc_.push_back(acc);
        if (rem == 0) {
            ++identifiable_edges_;
            return;
        }
        for (VertexId v : vertices) {
            if (!removed_[static_cast<size_t>(v)]) {
                incidence_[static_cast<size_t>(v)].push_back(label);
            }
        }
        if (rem == 1) {
            patch_queue_.push(label);
            drain();
        }
    }

    long long removed_vertices() const { return removed_vertices_; }
    long long identifiable_edges() const { return identifiable_edges_; }

private:
    std::vector<char> removed_;
    std::vector<std::vector<int>> incidence_;
    std::vector<int> remaining_;
    std::vector<VertexId> xor_acc_;
    std::queue<int> patch_queue_;
    long long removed_vertices_ = 0;
    long long identifiable_edges_ = 0;

    void drain() {
        while (!patch_queue_.empty()) {
            const int label = patch_queue_.front();
            patch_queue_.pop();
            if (remaining_[static_cast<size_t>(label)] != 1) continue;
            const VertexId v = xor_acc_[static_cast<size_t>(label)];
            removed_[static_cast<size_t>(v)] = 1;
            ++removed_vertices_;
            for (int incident : incidence_[static_cast<size_t>(v)]) {
                int& rem = remaining_[static_cast<size_t>(incident)];
                if (rem == 0) continue;
                --rem;
                xor_acc_[static_cast<size_t>(incident)] ^= v;
                if (rem == 0) {
                    ++identifiable_edges_;
                } else if (rem == 1) {
                    patch_queue_.push(incident);
                }
            }
            incidence_[static_cast<size_t>(v)].clear();
            incidence_[static_cast<size_t>(v)].shrink_to_fit();
        }
    }
};

} // namespace

std::vector<PathPoint> identifiability_path(const EventStream& stream,
                                            const std::vector<double>& grid) {
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > stream.horizon) {
            throw DomainError("grid time outside [0, horizon]");
        }
        if (i > 0 && grid[i] < grid[i - 1]) {
            throw DomainError("grid times must be sorted");
        }
    }
    const double n = static_cast<double>(stream.num_vertices);
    IncrementalCollapse peeler(stream.num_vertices);
    std::vector<PathPoint> path;
    path.reserve(grid.size());
    size_t next_event = 0;
    for (double t : grid) {
        while (next_event < stream.events.size() &&
               stream.events[next_event].time <= t) {
            const auto& event = stream.events[next_event];
            if (event.cardinality <= stream.num_vertices) {
                peeler.add_edge(event.vertices);
            }
            ++next_event;
        }
        path.push_back({t, static_cast<double>(peeler.removed_vertices()) / n,
                        static_cast<double>(peeler.identifiable_edges()) / n});
    }
    return path;
}

} // namespace hyperproc
