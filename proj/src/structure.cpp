#include "hyperproc/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperproc/errors.hpp"

namespace hyperproc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Level function F_s(x) = s rho'(x) + log(1-x). Then
//   t(x) > s  <=>  F_s(x) < 0,   t(x) < s  <=>  F_s(x) > 0.
double level_fn(const MixingDistribution& m, double s, double x) {
    return s * m.eval(x).d1 + std::log1p(-x);
}

// Numerator of t'(x): rho'(x)/(1-x) + rho''(x) log(1-x). Shares the sign
// of t' since rho'(x)^2 > 0.
double slope_numerator(const MixingDistribution& m, double x) {
    const auto e = m.eval(x);
    return e.d1 / (1.0 - x) + e.d2 * std::log1p(-x);
}

// Bisection for the boundary between {F >= 0} (at lo) and {F < 0} (at hi).
double bisect_level(const MixingDistribution& m, double s, double lo, double hi,
                    double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (level_fn(m, s, mid) < 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Boundary between {F > 0} (at lo) and {F <= 0} (at hi).
double bisect_level_up(const MixingDistribution& m, double s, double lo, double hi,
                       double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (level_fn(m, s, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double lower_envelope_scan(const MixingDistribution& m, double s,
                           const EnvelopeOptions& opts, double scan_from) {
    const double h = opts.grid_resolution;
    double prev_x = std::max(0.0, scan_from);
    double prev_f = level_fn(m, s, prev_x);
    if (prev_f < 0.0) {
        // The caller's hint overshot; fall back to a full scan.
        prev_x = 0.0;
        prev_f = level_fn(m, s, 0.0);
        if (prev_f < 0.0) return 0.0;
    }
    for (double x = prev_x + h; x < opts.x_cap + h; x += h) {
        const double xi = std::min(x, opts.x_cap);
        const double f = level_fn(m, s, xi);
        if (f < 0.0) {
            if (prev_f > 0.0) return bisect_level(m, s, prev_x, xi, opts.root_tolerance);
            return 0.0;  // F hugs zero from x = 0 (patch-free below threshold)
        }
        prev_x = xi;
        prev_f = f;
        if (xi >= opts.x_cap) break;
    }
    return 1.0;  // boundary beyond the cap
}

double upper_envelope_scan(const MixingDistribution& m, double s,
                           const EnvelopeOptions& opts, double scan_floor) {
    const double h = opts.grid_resolution;
    double prev_x = opts.x_cap;
    double prev_f = level_fn(m, s, prev_x);
    if (prev_f > 0.0) return 1.0;  // sup beyond the cap
    const double floor = std::max(0.0, scan_floor);
    for (double x = prev_x - h; x > floor - h; x -= h) {
        const double xi = std::max(x, 0.0);
        if (xi <= 0.0) break;
        const double f = level_fn(m, s, xi);
        if (f > 0.0) {
            return bisect_level_up(m, s, xi, prev_x, opts.root_tolerance);
        }
        prev_x = xi;
        prev_f = f;
    }
    if (floor > 0.0) {
        // Hint exhausted without a bracket; retry without it.
        return upper_envelope_scan(m, s, opts, 0.0);
    }
    // Nothing positive on the grid. A positive sliver may still sit below
    // the first grid cell.
    if (s * m.rho1() > 0.0) {
        return bisect_level_up(m, s, 0.0, prev_x, opts.root_tolerance);
    }
    for (double lo = 0.5 * h; lo > 1e-15; lo *= 0.5) {
        if (level_fn(m, s, lo) > 0.0) {
            return bisect_level_up(m, s, lo, prev_x, opts.root_tolerance);
        }
    }
    return 0.0;
}

// First x > from with t(x) > level, i.e. F_level(x) < 0. Returns the cap
// clamp (1.0) when the level is not re-exceeded before the cap.
double first_exceed_after(const MixingDistribution& m, double level, double from,
                          const EnvelopeOptions& opts) {
    const double h = opts.grid_resolution;
    double prev_x = from;
    for (double x = from + h; x < opts.x_cap + h; x += h) {
        const double xi = std::min(x, opts.x_cap);
        if (level_fn(m, level, xi) < 0.0) {
            return bisect_level(m, level, prev_x, xi, opts.root_tolerance);
        }
        prev_x = xi;
        if (xi >= opts.x_cap) break;
    }
    return 1.0;
}

// Largest x < from with t(x) < level, i.e. F_level(x) > 0; zero if none.
double last_below_before(const MixingDistribution& m, double level, double from,
                         const EnvelopeOptions& opts) {
    const double h = opts.grid_resolution;
    double prev_x = from;
    for (double x = from - h; x > -h; x -= h) {
        const double xi = std::max(x, 0.0);
        if (xi <= 0.0) break;
        if (level_fn(m, level, xi) > 0.0) {
            return bisect_level_up(m, level, xi, prev_x, opts.root_tolerance);
        }
        prev_x = xi;
    }
    if (level * m.rho1() > 0.0) {
        return bisect_level_up(m, level, 0.0, prev_x, opts.root_tolerance);
    }
    return 0.0;
}

} // namespace

double structure_function(const MixingDistribution& m, double x) {
    if (!(x > 0.0 && x < 1.0)) {
        throw DomainError("structure function defined on (0,1); got " +
                          std::to_string(x));
    }
    const double d1 = m.eval(x).d1;
    if (!(d1 > 0.0)) {
        throw DomainError("structure function needs rho'(x) > 0");
    }
    return -std::log1p(-x) / d1;
}

double structure_function_limit0(const MixingDistribution& m) {
    if (m.rho1() > 0.0) return 0.0;
    if (m.rho2() > 0.0) return 1.0 / (2.0 * m.rho2());
    throw DomainError("structure function diverges at 0 when rho1 = rho2 = 0");
}

double lower_envelope(const MixingDistribution& m, double s,
                      const EnvelopeOptions& opts) {
    if (s < 0.0) throw DomainError("envelope time must be >= 0");
    if (s == 0.0) return 0.0;
    if (m.rho1() == 0.0 && m.rho2() > 0.0 && s < 1.0 / (2.0 * m.rho2())) {
        return 0.0;  // threshold rule: t(0+) = 1/(2 rho2) > s
    }
    return lower_envelope_scan(m, s, opts, 0.0);
}

double upper_envelope(const MixingDistribution& m, double s,
                      const EnvelopeOptions& opts) {
    if (s < 0.0) throw DomainError("envelope time must be >= 0");
    if (s == 0.0) return 0.0;
    return upper_envelope_scan(m, s, opts, 0.0);
}

std::vector<EnvelopeTableRow> envelope_table(const MixingDistribution& m,
                                             const std::vector<double>& times,
                                             const EnvelopeOptions& opts) {
    std::vector<EnvelopeTableRow> table;
    table.reserve(times.size());
    double lower_hint = 0.0;
    double upper_hint = 0.0;
    double prev_s = -kInf;
    for (double s : times) {
        if (s < prev_s) throw DomainError("envelope table times must be sorted");
        prev_s = s;
        double lo, up;
        if (s <= 0.0) {
            lo = up = 0.0;
        } else {
            if (m.rho1() == 0.0 && m.rho2() > 0.0 && s < 1.0 / (2.0 * m.rho2())) {
                lo = 0.0;
            } else {
                lo = lower_envelope_scan(m, s, opts, std::max(0.0, lower_hint - opts.grid_resolution));
            }
            up = upper_envelope_scan(m, s, opts, std::max(0.0, upper_hint - 2.0 * opts.grid_resolution));
        }
        lower_hint = std::max(lower_hint, lo >= 1.0 ? opts.x_cap : lo);
        upper_hint = std::max(upper_hint, up >= 1.0 ? opts.x_cap : up);
        table.push_back({s, lo, up});
    }
    return table;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::GraphLike: return "graph-like";
        case Classification::Bicritical: return "bicritical";
        case Classification::Exceptional: return "exceptional";
    }
    return "unknown";
}

StructureProfile analyze_structure(const MixingDistribution& m,
                                   const EnvelopeOptions& opts) {
    StructureProfile profile{m, opts, {}, {}, {}, Classification::GraphLike};
    const double h = opts.grid_resolution;

    // Stationary points of t: sign changes of the derivative numerator.
    struct Stationary {
        double x;
        bool is_max;  // numerator sign + -> -
    };
    std::vector<Stationary> stationary;
    double prev_x = h;
    double prev_d = slope_numerator(m, prev_x);
    for (double x = 2.0 * h; x < opts.x_cap + h; x += h) {
        const double xi = std::min(x, opts.x_cap);
        const double d = slope_numerator(m, xi);
        if ((prev_d > 0.0 && d < 0.0) || (prev_d < 0.0 && d > 0.0)) {
            double lo = prev_x, hi = xi;
            const bool is_max = prev_d > 0.0;
            while (hi - lo > opts.root_tolerance) {
                const double mid = 0.5 * (lo + hi);
                const double dm = slope_numerator(m, mid);
                if ((dm > 0.0) == is_max) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            stationary.push_back({0.5 * (lo + hi), is_max});
        }
        prev_x = xi;
        prev_d = d;
        if (xi >= opts.x_cap) break;
    }
    for (const auto& sp : stationary) profile.stationary_points.push_back(sp.x);

    const double min_width = opts.jump_width_factor * h;

    // Jumps of g: local maxima that raise the running supremum of t, paired
    // with the first point where t re-exceeds their level. The limit value
    // of t at 0 acts as the initial barrier, and generates its own jump
    // when t starts out decreasing (patch-free mixtures past threshold).
    double running_sup;
    if (m.rho1() > 0.0) {
        running_sup = 0.0;
    } else if (m.rho2() > 0.0) {
        running_sup = 1.0 / (2.0 * m.rho2());
    } else {
        running_sup = kInf;
    }
    if (std::isfinite(running_sup) && slope_numerator(m, h) < 0.0) {
        const double level = running_sup;
        if (level > 0.0) {
            const double re = first_exceed_after(m, level, h, opts);
            const bool clamped = re >= 1.0;
            if (clamped || re > min_width) {
                profile.lower_jumps.push_back({level, 0.0, re, clamped});
            }
        }
    }
    for (const auto& sp : stationary) {
        if (!sp.is_max) continue;
        const double level = structure_function(m, sp.x);
        if (!(level > running_sup)) continue;
        const double re = first_exceed_after(m, level, sp.x, opts);
        const bool clamped = re >= 1.0;
        if (clamped || re - sp.x > min_width) {
            profile.lower_jumps.push_back({level, sp.x, re, clamped});
        }
        running_sup = level;
    }

    // Jumps of g*: local minima that lower the running infimum of t over
    // everything to their right, paired with the last point below their
    // level (zero when there is none).
    double running_inf = kInf;
    for (auto it = stationary.rbegin(); it != stationary.rend(); ++it) {
        if (it->is_max) continue;
        const double level = structure_function(m, it->x);
        if (!(level < running_inf)) continue;
        const double below = last_below_before(m, level, it->x, opts);
        if (it->x - below > min_width) {
            profile.upper_jumps.push_back({level, below, it->x, false});
        }
        running_inf = level;
    }
    std::reverse(profile.upper_jumps.begin(), profile.upper_jumps.end());

    // No level may have a root strictly between the endpoints of a jump of
    // g; a root there breaks the two-cluster picture of the transition.
    // Besides a coarse grid, probe the stationary points of t inside the
    // interval: a tangency (equal hump heights) shows up there first.
    for (const auto& jump : profile.lower_jumps) {
        const double hi = jump.upper_clamped ? opts.x_cap : jump.upper;
        const double width = hi - jump.lower;
        const double margin = width / 8.0;
        const double slack = 1e-10 * (1.0 + jump.time);
        auto probe = [&](double x) {
            if (level_fn(m, jump.time, x) <= slack) {
                throw AssumptionViolated(
                    "level " + std::to_string(jump.time) +
                    " has an interior root inside its jump interval");
            }
        };
        // Coarse interior grid away from the endpoints, where F vanishes
        // by construction.
        const double step = std::max(width / 4096.0, opts.root_tolerance);
        for (double x = jump.lower + margin; x < hi - margin; x += step) probe(x);
        // Stationary points of t carry the tangency case (an interior hump
        // grazing the jump level); only the jump's own endpoints are exempt.
        for (const auto& sp : stationary) {
            if (std::abs(sp.x - jump.lower) < 1e-9) continue;
            if (!jump.upper_clamped && std::abs(sp.x - jump.upper) < 1e-9) continue;
            if (sp.x > jump.lower && sp.x < hi) probe(sp.x);
        }
    }

    if (stationary.empty() && profile.lower_jumps.empty()) {
        profile.classification = Classification::GraphLike;
    } else if (profile.lower_jumps.size() == 1 && profile.upper_jumps.size() == 1) {
        profile.classification = Classification::Bicritical;
    } else {
        profile.classification = Classification::Exceptional;
    }
    return profile;
}

std::vector<EnvelopeJump> discontinuity_set(const MixingDistribution& m,
                                            const EnvelopeOptions& opts) {
    return analyze_structure(m, opts).lower_jumps;
}

Classification classify(const MixingDistribution& m, const EnvelopeOptions& opts) {
    return analyze_structure(m, opts).classification;
}

double graph_envelope(double rho2, double s, const EnvelopeOptions& opts) {
    if (!(rho2 > 0.0)) throw DomainError("graph envelope requires rho2 > 0");
    const MixingDistribution skeleton = MixingDistribution::intensity({0.0, rho2});
    return lower_envelope(skeleton, s, opts);
}

double largest_root_phi(double t, double rho2, double tolerance) {
    if (!(rho2 > 0.0)) throw DomainError("largest_root_phi requires rho2 > 0");
    if (t < 0.0) throw DomainError("largest_root_phi requires t >= 0");
    const double mu = 2.0 * t * rho2;
    if (mu <= 1.0) return 0.0;
    if (mu > 690.0) return 1.0;  // root within one ulp of 1
    double lo = 1.0 - 1.0 / mu;          // maximum of mu x + log(1-x)
    double hi = 1.0 - 0.5 * std::exp(-mu);  // f(hi) = -log 2 - mu e^{-mu}/2 < 0
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mu * mid + std::log1p(-mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

FluidAtom make_atom(const MixingDistribution& m, double t, double vertex_fraction,
                    double probability) {
    FluidAtom atom;
    atom.probability = probability;
    atom.vertex_fraction = vertex_fraction;
    if (vertex_fraction >= 1.0) {
        atom.essential_fraction = 0.0;
        atom.edge_fraction = t * m.eval(1.0).value;
    } else {
        atom.essential_fraction =
            -(1.0 - vertex_fraction) * std::log1p(-vertex_fraction);
        atom.edge_fraction =
            t * m.eval(vertex_fraction).value + atom.essential_fraction;
    }
    return atom;
}

} // namespace

std::vector<FluidAtom> fluid_prediction(const StructureProfile& profile, double t) {
    if (t < 0.0) throw DomainError("fluid prediction requires t >= 0");
    if (!(profile.mixing.rho1() > 0.0)) {
        throw DomainError("with-patch law requires rho1 > 0");
    }
    const double match_tol = 1e-9 * (1.0 + t);
    for (const auto& jump : profile.lower_jumps) {
        if (std::abs(jump.time - t) <= match_tol) {
            return {make_atom(profile.mixing, t, jump.lower, 0.5),
                    make_atom(profile.mixing, t, jump.upper, 0.5)};
        }
    }
    const double g = lower_envelope(profile.mixing, t, profile.options);
    return {make_atom(profile.mixing, t, g, 1.0)};
}

std::vector<FluidAtom> macroscopic_prediction(const StructureProfile& profile,
                                              double t) {
    if (t < 0.0) throw DomainError("macroscopic prediction requires t >= 0");
    if (!(profile.mixing.rho1() == 0.0 && profile.mixing.rho2() > 0.0)) {
        throw DomainError("macroscopic law requires rho1 = 0 < rho2");
    }
    const double g2 = graph_envelope(profile.mixing.rho2(), t, profile.options);
    const double g = lower_envelope(profile.mixing, t, profile.options);
    std::vector<FluidAtom> atoms;
    atoms.push_back({1.0 - g2, 0.0, 0.0, 0.0});
    FluidAtom giant = make_atom(profile.mixing, t, g, g2);
    atoms.push_back(giant);
    return atoms;
}

namespace {

double log_choose(double a, double b) {
    return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// C(m,k)/C(n,k) and friends through log-gamma; exact zero outside range.
double choose_ratio(long long m, long long k, long long n, long long kn) {
    if (k < 0 || k > m || kn < 0 || kn > n) return 0.0;
    return std::exp(log_choose(static_cast<double>(m), static_cast<double>(k)) -
                    log_choose(static_cast<double>(n), static_cast<double>(kn)));
}

} // namespace

double nonidentifiable_mean_exact(const MixingDistribution& rho, long long n,
                                  double t, long long m) {
    if (n < 1 || m < 0 || m > n) throw DomainError("need 0 <= m <= N, N >= 1");
    double covered = 0.0;
    const int k_max = std::min<long long>(rho.max_cardinality(), n);
    for (int k = 1; k <= k_max; ++k) {
        const double rk = rho.coeff(k);
        if (rk == 0.0) continue;
        double inside = choose_ratio(m, k, n, k);
        inside += static_cast<double>(n - m) * choose_ratio(m, k - 1, n, k);
        covered += rk * inside;
    }
    return static_cast<double>(n) * t * (1.0 - covered);
}

double nonidentifiable_mean_limit(const MixingDistribution& rho, long long n,
                                  double t, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma outside [0,1]");
    const auto e = rho.eval(gamma);
    return static_cast<double>(n) * t * (1.0 - e.value - (1.0 - gamma) * e.d1);
}

std::vector<double> conditional_beta(const MixingDistribution& rho, long long n,
                                     double t, long long m) {
    if (n < 1 || m < 0 || m >= n) throw DomainError("need 0 <= m < N, N >= 1");
    const int k_max = rho.max_cardinality();
    std::vector<double> beta(static_cast<size_t>(std::max(k_max + 1, 3)), 0.0);
    const double scale = t / (1.0 - static_cast<double>(m) / static_cast<double>(n));
    for (int j = 2; j <= k_max && j <= n - m; ++j) {
        const double lc_nm = log_choose(static_cast<double>(n - m), static_cast<double>(j));
        double sum = 0.0;
        for (int i = 0; i + j <= k_max && i <= m; ++i) {
            const double r = rho.coeff(i + j);
            if (r == 0.0) continue;
            sum += r * std::exp(lc_nm +
                                log_choose(static_cast<double>(m), static_cast<double>(i)) -
                                log_choose(static_cast<double>(n), static_cast<double>(i + j)));
        }
        beta[static_cast<size_t>(j)] = scale * sum;
    }
    return beta;
}

FluidPathPoint collapse_fluid_path(const MixingDistribution& beta, double s) {
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("fluid path defined on [0,1)");
    const auto e = beta.eval(s);
    const double log_term = std::log1p(-s);
    return {(1.0 - s) * (e.d1 + log_term), e.value - (1.0 - s) * log_term};
}

} // namespace hyperproc
