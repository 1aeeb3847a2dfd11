#ifndef HYPERPROC_STRUCTURE_HPP
#define HYPERPROC_STRUCTURE_HPP

#include <string>
#include <vector>

#include "hyperproc/mixing.hpp"

namespace hyperproc {

// Numerical controls shared by the envelope machinery. The scan grid is
// uniform in x; refinement is plain bisection, which stays robust against
// the log singularity at x -> 1. x is capped below 1 to keep log(1-x)
// finite.
struct EnvelopeOptions {
    double grid_resolution = 1e-4;
    double root_tolerance = 1e-12;
    double x_cap = 1.0 - 1e-12;
    double jump_width_factor = 10.0;  // min jump width, in grid cells
};

// t(x) = -log(1-x) / rho'(x) on (0,1). DomainError at the endpoints.
double structure_function(const MixingDistribution& m, double x);

// Continuous extension at x -> 0+: 0 when rho1 > 0, 1/(2 rho2) when
// rho1 = 0 < rho2.
double structure_function_limit0(const MixingDistribution& m);

// g(s)  = inf{x in (0,1) : t(x) > s}
// g*(s) = sup{x in (0,1) : t(x) < s} v 0
// Both are clamped to 1 when the boundary lies beyond the x cap.
double lower_envelope(const MixingDistribution& m, double s,
                      const EnvelopeOptions& opts = {});
double upper_envelope(const MixingDistribution& m, double s,
                      const EnvelopeOptions& opts = {});

struct EnvelopeTableRow {
    double s;
    double lower;
    double upper;
};

// (s, g, g*) sampled over a time grid; one monotone sweep instead of
// independent scans per s.
std::vector<EnvelopeTableRow> envelope_table(const MixingDistribution& m,
                                             const std::vector<double>& times,
                                             const EnvelopeOptions& opts = {});

struct EnvelopeJump {
    double time;         // s with g(s-) != g(s)
    double lower;        // g(s-)
    double upper;        // g(s)
    bool upper_clamped;  // boundary beyond the x cap; upper reported as 1
};

enum class Classification { GraphLike, Bicritical, Exceptional };

std::string to_string(Classification c);

struct StructureProfile {
    MixingDistribution mixing;
    EnvelopeOptions options;
    std::vector<double> stationary_points;  // roots of t'(x) in (0,1)
    std::vector<EnvelopeJump> lower_jumps;  // discontinuities of g
    std::vector<EnvelopeJump> upper_jumps;  // discontinuities of g*
    Classification classification = Classification::GraphLike;
};

// Locates stationary points of t from the closed-form derivative numerator
// rho'(x)/(1-x) + rho''(x) log(1-x), builds the running envelope records,
// verifies that no extra level-set root lies strictly inside any jump
// (AssumptionViolated otherwise) and classifies the mixture.
StructureProfile analyze_structure(const MixingDistribution& m,
                                   const EnvelopeOptions& opts = {});

// Convenience wrappers over analyze_structure.
std::vector<EnvelopeJump> discontinuity_set(const MixingDistribution& m,
                                            const EnvelopeOptions& opts = {});
Classification classify(const MixingDistribution& m,
                        const EnvelopeOptions& opts = {});

// Lower envelope of the two-edge skeleton t2(x) = -log(1-x)/(2 rho2 x);
// continuous, zero up to 1/(2 rho2), tends to 1.
double graph_envelope(double rho2, double s, const EnvelopeOptions& opts = {});

// Largest root in [0,1] of 2 t rho2 x + log(1-x) = 0; zero when
// 2 t rho2 <= 1. Equals the escape probability of the coupled walk and the
// giant-component fraction of the skeleton.
double largest_root_phi(double t, double rho2, double tolerance = 1e-12);

// One atom of a limiting law for the rescaled identifiable counts.
struct FluidAtom {
    double probability;
    double vertex_fraction;     // limit of T~
    double edge_fraction;       // limit of Z~
    double essential_fraction;  // -(1-T)log(1-T) part of Z~
};

// Law of the rescaled counts at time t for mixtures with patches: a single
// atom at g(t) off the discontinuity set, a fair-coin pair at g(t-)/g(t)
// on it.
std::vector<FluidAtom> fluid_prediction(const StructureProfile& profile, double t);

// Patch-free macroscopic law: atom at (0,0) with probability 1 - g2(t) and
// at (g(t), z(t)) with probability g2(t).
std::vector<FluidAtom> macroscopic_prediction(const StructureProfile& profile,
                                              double t);

// Conditional mean of the non-identifiable edge count given m identifiable
// vertices: exact finite-N hypergeometric form and its N -> infinity limit
// at gamma = m/N.
double nonidentifiable_mean_exact(const MixingDistribution& rho, long long n,
                                  double t, long long m);
double nonidentifiable_mean_limit(const MixingDistribution& rho, long long n,
                                  double t, double gamma);

// Intensity coefficients of the residual hypergraph conditional on the
// identifiable set having size m: beta_1 = 0 and, for j >= 2,
// beta_j = t/(1-m/N) * C(N-m,j) * sum_i rho_{i+j} C(m,i)/C(N,i+j).
// Returned vector is indexed by cardinality (entries 0 and 1 are zero).
std::vector<double> conditional_beta(const MixingDistribution& rho, long long n,
                                     double t, long long m);

// Deterministic trajectory of the rescaled randomized-collapse chain for
// intensity beta: y(s) = (1-s)(beta'(s) + log(1-s)),
// z(s) = beta(s) - (1-s) log(1-s).
struct FluidPathPoint {
    double patches;
    double debris;
};
FluidPathPoint collapse_fluid_path(const MixingDistribution& beta, double s);

} // namespace hyperproc

#endif
