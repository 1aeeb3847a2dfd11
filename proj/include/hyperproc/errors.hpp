#ifndef HYPERPROC_ERRORS_HPP
#define HYPERPROC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hyperproc {

// Thrown when an edge references a vertex outside [0, num_vertices) or
// repeats a vertex.
struct InvalidVertex : std::invalid_argument {
    explicit InvalidVertex(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown by operations that require a patch-free hypergraph.
struct PatchesPresent : std::logic_error {
    explicit PatchesPresent(const std::string& what) : std::logic_error(what) {}
};

// Thrown by multigraph-only operations when an edge has cardinality != 2.
struct NotAGraph : std::invalid_argument {
    explicit NotAGraph(const std::string& what) : std::invalid_argument(what) {}
};

// Argument outside the mathematical domain of the function.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A level set of s*rho'(x) + log(1-x) has an unexpected interior root
// between the two endpoints of an envelope jump.
struct AssumptionViolated : std::runtime_error {
    explicit AssumptionViolated(const std::string& what) : std::runtime_error(what) {}
};

// Stepping a collapse chain whose patch count already reached zero.
struct ChainStopped : std::logic_error {
    explicit ChainStopped(const std::string& what) : std::logic_error(what) {}
};

// Statistical comparison received no samples.
struct EmptySample : std::invalid_argument {
    explicit EmptySample(const std::string& what) : std::invalid_argument(what) {}
};

// Bad experiment configuration (missing fields, inconsistent values).
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace hyperproc

#endif
