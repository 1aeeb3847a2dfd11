#include "hyperproc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperproc/collapse.hpp"
#include "hyperproc/errors.hpp"
#include "hyperproc/io.hpp"
#include "hyperproc/parallel.hpp"
#include "hyperproc/sampler.hpp"
#include "hyperproc/stats.hpp"
#include "hyperproc/structure.hpp"
#include "hyperproc/walks.hpp"

namespace hyperproc {

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "static-limit") return ExperimentKind::StaticLimit;
    if (name == "process-path") return ExperimentKind::ProcessPath;
    if (name == "jump-coinflip") return ExperimentKind::JumpCoinflip;
    if (name == "domain-microscopic") return ExperimentKind::DomainMicroscopic;
    if (name == "domain-macroscopic") return ExperimentKind::DomainMacroscopic;
    if (name == "core-check") return ExperimentKind::CoreCheck;
    throw ConfigError("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::StaticLimit: return "static-limit";
        case ExperimentKind::ProcessPath: return "process-path";
        case ExperimentKind::JumpCoinflip: return "jump-coinflip";
        case ExperimentKind::DomainMicroscopic: return "domain-microscopic";
        case ExperimentKind::DomainMacroscopic: return "domain-macroscopic";
        case ExperimentKind::CoreCheck: return "core-check";
    }
    return "unknown";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    cfg.rho = j.value("rho", std::vector<double>{});
    cfg.num_vertices = j.value("n", 0LL);
    if (j.contains("time_grid")) {
        cfg.time_grid = j.at("time_grid").get<std::vector<double>>();
    } else if (j.contains("t")) {
        cfg.time_grid = {j.at("t").get<double>()};
    }
    cfg.trials = j.value("trials", 0LL);
    cfg.master_seed = j.value("master_seed", 0ULL);
    cfg.parallel = j.value("parallel", true);
    cfg.root_vertex = j.value("root_vertex", 0);
    if (j.contains("tolerances")) {
        for (const auto& [key, value] : j.at("tolerances").items()) {
            cfg.tolerances[key] = value.get<double>();
        }
    }
    cfg.out_dir = j.value("out_dir", std::string{});
    cfg.format = j.value("format", std::string{"json"});
    cfg.validate();
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["kind"] = hyperproc::to_string(kind);
    j["rho"] = rho;
    j["n"] = num_vertices;
    j["time_grid"] = time_grid;
    j["trials"] = trials;
    j["master_seed"] = master_seed;
    j["parallel"] = parallel;
    j["root_vertex"] = root_vertex;
    j["tolerances"] = tolerances;
    j["out_dir"] = out_dir;
    j["format"] = format;
    return j;
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (num_vertices < 1) throw ConfigError("n must be >= 1");
    for (double t : time_grid) {
        if (t < 0.0) throw ConfigError("times must be >= 0");
    }
    if (format != "json" && format != "csv") {
        throw ConfigError("format must be 'json' or 'csv'");
    }
    if (kind != ExperimentKind::CoreCheck) {
        if (rho.empty()) throw ConfigError("rho coefficients are required");
        if (time_grid.empty() && kind != ExperimentKind::JumpCoinflip) {
            throw ConfigError("a time grid (or t) is required");
        }
    }
}

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
}

bool Report::all_pass() const {
    for (const auto& c : comparisons) {
        if (!c.pass) return false;
    }
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["config"] = config.to_json();
    // Scheduling and output placement are not part of the experiment's
    // identity; reruns must produce byte-identical reports.
    j["config"].erase("parallel");
    j["config"].erase("out_dir");
    j["comparisons"] = nlohmann::json::array();
    for (const auto& c : comparisons) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["target_source"] = c.target_source;
        cj["target"] = c.target;
        cj["observed"] = c.observed;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        j["comparisons"].push_back(cj);
    }
    j["pass"] = all_pass();
    j["details"] = details;
    return j;
}

namespace {

Comparison make_comparison(std::string name, std::string source, double target,
                           double observed, double tol) {
    Comparison c;
    c.name = std::move(name);
    c.target_source = std::move(source);
    c.target = target;
    c.observed = observed;
    c.tolerance = tol;
    c.pass = std::abs(observed - target) <= tol;
    return c;
}

Comparison make_threshold(std::string name, std::string source, double minimum,
                          double observed) {
    Comparison c;
    c.name = std::move(name);
    c.target_source = std::move(source);
    c.target = minimum;
    c.observed = observed;
    c.tolerance = 0.0;
    c.pass = observed >= minimum;
    return c;
}

std::string grid_label(double t) { return "t=" + format_double(t); }

MixingDistribution mixture_from(const ExperimentConfig& cfg) {
    return MixingDistribution::probability(cfg.rho);
}

} // namespace

Report run_static_limit(const ExperimentConfig& cfg) {
    const MixingDistribution rho = mixture_from(cfg);
    rho.require_process_usable();
    if (!(rho.rho1() > 0.0)) {
        throw ConfigError("static-limit requires rho_1 > 0; use the domain "
                          "experiments for patch-free mixtures");
    }
    const StructureProfile profile = analyze_structure(rho);

    std::vector<double> grid = cfg.time_grid;
    if (cfg.kind == ExperimentKind::JumpCoinflip) {
        if (profile.lower_jumps.empty()) {
            throw ConfigError("jump-coinflip requires a mixture whose lower "
                              "envelope jumps");
        }
        grid = {profile.lower_jumps.front().time};
    }

    const size_t points = grid.size();
    const auto trials = static_cast<size_t>(cfg.trials);
    std::vector<double> t_frac(points * trials), z_frac(points * trials);
    const double n = static_cast<double>(cfg.num_vertices);

    run_trials(static_cast<long long>(points * trials), cfg.parallel, [&](long long flat) {
        const size_t g = static_cast<size_t>(flat) / trials;
        RngStream rng(cfg.master_seed, static_cast<uint64_t>(flat));
        const Hypergraph h = sample_static(rho.scaled(grid[g]),
                                           static_cast<int>(cfg.num_vertices), rng);
        const CollapseResult r = collapse(h);
        t_frac[static_cast<size_t>(flat)] =
            static_cast<double>(r.identifiable_vertices.size()) / n;
        z_frac[static_cast<size_t>(flat)] =
            static_cast<double>(r.identifiable_edge_count) / n;
    });

    Report report;
    report.config = cfg;
    const double band_t = cfg.tolerance("band_T", 0.01);
    const double band_z = cfg.tolerance("band_Z", 0.01);
    const double min_fraction = cfg.tolerance("min_fraction", 0.9);
    const double cluster_band = cfg.tolerance("cluster_band", 0.05);
    const double coin_dev = cfg.tolerance("coin_deviation", 0.15);

    std::ostringstream csv;
    csv << "trial,t,T,Z\n";
    nlohmann::json per_point = nlohmann::json::array();
    for (size_t g = 0; g < points; ++g) {
        const double t = grid[g];
        const auto atoms = fluid_prediction(profile, t);
        nlohmann::json point;
        point["t"] = t;
        for (size_t i = 0; i < trials; ++i) {
            csv << i << ',' << format_double(t) << ','
                << format_double(t_frac[g * trials + i]) << ','
                << format_double(z_frac[g * trials + i]) << "\n";
        }
        if (atoms.size() == 1) {
            long long t_in = 0, z_in = 0;
            for (size_t i = 0; i < trials; ++i) {
                t_in += std::abs(t_frac[g * trials + i] - atoms[0].vertex_fraction) < band_t;
                z_in += std::abs(z_frac[g * trials + i] - atoms[0].edge_fraction) < band_z;
            }
            report.comparisons.push_back(make_threshold(
                "vertex_fraction_in_band@" + grid_label(t), "lower_envelope(rho, t)",
                min_fraction, static_cast<double>(t_in) / static_cast<double>(trials)));
            report.comparisons.push_back(make_threshold(
                "edge_fraction_in_band@" + grid_label(t),
                "t*rho(g) - (1-g)log(1-g) via lower_envelope", min_fraction,
                static_cast<double>(z_in) / static_cast<double>(trials)));
            point["target_T"] = atoms[0].vertex_fraction;
            point["target_Z"] = atoms[0].edge_fraction;
        } else {
            const double lo = atoms[0].vertex_fraction;
            const double hi = atoms[1].vertex_fraction;
            const double mid = 0.5 * (lo + hi);
            long long near_any = 0, low_cluster = 0;
            for (size_t i = 0; i < trials; ++i) {
                const double v = t_frac[g * trials + i];
                near_any += std::abs(v - lo) < cluster_band || std::abs(v - hi) < cluster_band;
                low_cluster += v < mid;
            }
            report.comparisons.push_back(make_threshold(
                "cluster_membership@" + grid_label(t),
                "discontinuity_set endpoints g(s-), g(s)", 1.0,
                static_cast<double>(near_any) / static_cast<double>(trials)));
            report.comparisons.push_back(make_comparison(
                "low_cluster_frequency@" + grid_label(t),
                "fair-coin law at a jump of g", 0.5,
                static_cast<double>(low_cluster) / static_cast<double>(trials),
                coin_dev));
            point["jump_lower"] = lo;
            point["jump_upper"] = hi;
        }
        per_point.push_back(point);
    }
    report.details["points"] = per_point;
    report.trial_csv = csv.str();
    return report;
}

Report run_process_path(const ExperimentConfig& cfg) {
    const MixingDistribution rho = mixture_from(cfg);
    rho.require_process_usable();
    if (!(rho.rho1() > 0.0)) {
        throw ConfigError("process-path requires rho_1 > 0");
    }
    const StructureProfile profile = analyze_structure(rho);
    std::vector<double> grid = cfg.time_grid;
    std::sort(grid.begin(), grid.end());
    const double horizon = grid.back();
    const size_t points = grid.size();
    const auto trials = static_cast<size_t>(cfg.trials);

    std::vector<double> t_frac(points * trials), z_frac(points * trials);
    run_trials(cfg.trials, cfg.parallel, [&](long long trial) {
        RngStream rng(cfg.master_seed, static_cast<uint64_t>(trial));
        const EventStream stream = sample_process(
            rho, static_cast<int>(cfg.num_vertices), horizon, rng);
        const auto path = identifiability_path(stream, grid);
        for (size_t g = 0; g < points; ++g) {
            t_frac[g * trials + static_cast<size_t>(trial)] = path[g].vertex_fraction;
            z_frac[g * trials + static_cast<size_t>(trial)] = path[g].edge_fraction;
        }
    });

    Report report;
    report.config = cfg;
    const double band_t = cfg.tolerance("band_T", 0.01);
    const double band_z = cfg.tolerance("band_Z", 0.01);
    const double min_fraction = cfg.tolerance("min_fraction", 0.9);
    const double jump_margin = cfg.tolerance("jump_margin", 0.05);
    const double cluster_band = cfg.tolerance("cluster_band", 0.05);

    // Paths are monotone trial by trial; count any violation.
    long long monotone = 0;
    for (size_t i = 0; i < trials; ++i) {
        bool ok = true;
        for (size_t g = 1; g < points; ++g) {
            ok = ok && t_frac[g * trials + i] >= t_frac[(g - 1) * trials + i] &&
                 z_frac[g * trials + i] >= z_frac[(g - 1) * trials + i];
        }
        monotone += ok;
    }
    report.comparisons.push_back(make_threshold(
        "monotone_paths", "identifiability is monotone in t", 1.0,
        static_cast<double>(monotone) / static_cast<double>(trials)));

    std::ostringstream csv;
    csv << "trial,t,T,Z\n";
    for (size_t i = 0; i < trials; ++i) {
        for (size_t g = 0; g < points; ++g) {
            csv << i << ',' << format_double(grid[g]) << ','
                << format_double(t_frac[g * trials + i]) << ','
                << format_double(z_frac[g * trials + i]) << "\n";
        }
    }
    report.trial_csv = csv.str();

    nlohmann::json per_point = nlohmann::json::array();
    for (size_t g = 0; g < points; ++g) {
        const double t = grid[g];
        double nearest_jump = -1.0;
        for (const auto& jump : profile.lower_jumps) {
            if (nearest_jump < 0.0 ||
                std::abs(jump.time - t) < std::abs(nearest_jump - t)) {
                nearest_jump = jump.time;
            }
        }
        nlohmann::json point;
        point["t"] = t;
        if (nearest_jump >= 0.0 && std::abs(nearest_jump - t) <= jump_margin) {
            // Inside the critical window: report cluster statistics only.
            const auto atoms = fluid_prediction(profile, nearest_jump);
            const double lo = atoms[0].vertex_fraction;
            const double hi = atoms[1].vertex_fraction;
            long long low_cluster = 0, near_any = 0;
            for (size_t i = 0; i < trials; ++i) {
                const double v = t_frac[g * trials + i];
                near_any += std::abs(v - lo) < cluster_band || std::abs(v - hi) < cluster_band;
                low_cluster += v < 0.5 * (lo + hi);
            }
            point["jump_time"] = nearest_jump;
            point["near_cluster_fraction"] =
                static_cast<double>(near_any) / static_cast<double>(trials);
            point["low_cluster_fraction"] =
                static_cast<double>(low_cluster) / static_cast<double>(trials);
        } else {
            const auto atoms = fluid_prediction(profile, t);
            long long t_in = 0, z_in = 0;
            for (size_t i = 0; i < trials; ++i) {
                t_in += std::abs(t_frac[g * trials + i] - atoms[0].vertex_fraction) < band_t;
                z_in += std::abs(z_frac[g * trials + i] - atoms[0].edge_fraction) < band_z;
            }
            report.comparisons.push_back(make_threshold(
                "vertex_fraction_in_band@" + grid_label(t), "lower_envelope(rho, t)",
                min_fraction, static_cast<double>(t_in) / static_cast<double>(trials)));
            report.comparisons.push_back(make_threshold(
                "edge_fraction_in_band@" + grid_label(t),
                "t*rho(g) - (1-g)log(1-g) via lower_envelope", min_fraction,
                static_cast<double>(z_in) / static_cast<double>(trials)));
            point["target_T"] = atoms[0].vertex_fraction;
            point["target_Z"] = atoms[0].edge_fraction;
        }
        per_point.push_back(point);
    }
    report.details["points"] = per_point;
    return report;
}

Report run_domain_experiments(const ExperimentConfig& cfg) {
    const MixingDistribution rho = mixture_from(cfg);
    if (!(rho.rho1() == 0.0 && rho.rho2() > 0.0)) {
        throw ConfigError("domain experiments require rho_1 = 0 < rho_2");
    }
    const double t = cfg.time_grid.at(0);
    const auto trials = static_cast<size_t>(cfg.trials);
    std::vector<long long> domain_sizes(trials), edge_counts(trials);

    run_trials(cfg.trials, cfg.parallel, [&](long long trial) {
        RngStream rng(cfg.master_seed, static_cast<uint64_t>(trial));
        const Hypergraph h = sample_static(rho.scaled(t),
                                           static_cast<int>(cfg.num_vertices), rng);
        const DomainResult dom = domain_of(h, cfg.root_vertex);
        domain_sizes[static_cast<size_t>(trial)] =
            static_cast<long long>(dom.vertices.size());
        edge_counts[static_cast<size_t>(trial)] = dom.identifiable_edge_count;
    });

    Report report;
    report.config = cfg;
    const double mu = 2.0 * t * rho.rho2();

    std::ostringstream csv;
    csv << "trial,T,Z\n";
    for (size_t i = 0; i < trials; ++i) {
        csv << i << ',' << domain_sizes[i] << ',' << edge_counts[i] << "\n";
    }
    report.trial_csv = csv.str();

    // Microscopic degeneracy: the domain size and the identifiable edge
    // count converge together; their gap is sum of the patch collisions.
    long long gap_le_2 = 0;
    std::map<long long, long long> histogram;
    for (size_t i = 0; i < trials; ++i) {
        ++histogram[domain_sizes[i]];
        gap_le_2 += (domain_sizes[i] - (edge_counts[i] + 1)) <= 2;
    }
    report.details["gap_within_2_fraction"] =
        static_cast<double>(gap_le_2) / static_cast<double>(trials);

    if (cfg.kind == ExperimentKind::DomainMicroscopic) {
        const long long window_hi =
            static_cast<long long>(cfg.tolerance("tv_window_hi", 30));
        const double tv_tol = cfg.tolerance("tv_tolerance", 0.03);
        const auto cmp = compare_histogram_to_pmf(
            histogram, 1, window_hi,
            [mu](long long k) { return borel_pmf(mu, k); });
        Comparison c;
        c.name = "domain_size_tv";
        c.target_source = "total-progeny pmf at mu = 2 t rho2";
        c.target = 0.0;
        c.observed = cmp.tv_distance;
        c.tolerance = tv_tol;
        c.pass = cmp.tv_distance < tv_tol;
        report.comparisons.push_back(c);
        report.details["tv_window_hi"] = window_hi;
        report.details["empirical_mass_outside_window"] = cmp.empirical_outside;
        report.details["target_mass_outside_window"] = cmp.target_outside;
    } else {
        const double cutoff_exponent = cfg.tolerance("large_cutoff_exponent", 2.0 / 3.0);
        const double cutoff =
            std::pow(static_cast<double>(cfg.num_vertices), cutoff_exponent);
        const double freq_tol = cfg.tolerance("frequency_tolerance", 0.05);
        const double mean_tol = cfg.tolerance("mean_tolerance", 0.02);
        const double phi = largest_root_phi(t, rho.rho2());
        const StructureProfile profile = analyze_structure(rho);
        const auto atoms = macroscopic_prediction(profile, t);

        long long large = 0;
        double sum_t = 0.0, sum_z = 0.0;
        const double n = static_cast<double>(cfg.num_vertices);
        for (size_t i = 0; i < trials; ++i) {
            if (static_cast<double>(domain_sizes[i]) > cutoff) {
                ++large;
                sum_t += static_cast<double>(domain_sizes[i]) / n;
                sum_z += static_cast<double>(edge_counts[i]) / n;
            }
        }
        report.comparisons.push_back(make_comparison(
            "large_domain_frequency", "largest_root_phi(t, rho2)", phi,
            static_cast<double>(large) / static_cast<double>(trials), freq_tol));
        if (large > 0) {
            report.comparisons.push_back(make_comparison(
                "conditional_vertex_fraction", "lower_envelope(rho, t)",
                atoms[1].vertex_fraction, sum_t / static_cast<double>(large),
                mean_tol));
            report.comparisons.push_back(make_comparison(
                "conditional_edge_fraction",
                "t*rho(g) - (1-g)log(1-g) via lower_envelope",
                atoms[1].edge_fraction, sum_z / static_cast<double>(large),
                mean_tol));
        }
        report.details["large_cutoff"] = cutoff;
        report.details["large_count"] = large;
    }
    return report;
}

Report run_core_check(const ExperimentConfig& cfg) {
    const auto trials = static_cast<size_t>(cfg.trials);
    const std::vector<double> densities{0.5, 1.0, 1.5, 2.0};
    std::vector<long long> core_sizes(trials), vertex_counts(trials),
        edge_totals(trials);
    std::vector<char> agree(trials, 0);

    run_trials(cfg.trials, cfg.parallel, [&](long long trial) {
        RngStream rng(cfg.master_seed, static_cast<uint64_t>(trial));
        const int n =
            2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(
                    std::max<long long>(1, cfg.num_vertices - 1))));
        const double density = densities[static_cast<size_t>(trial) % densities.size()];
        const long long m = rng.next_poisson(density * static_cast<double>(n));
        Hypergraph g(n);
        for (long long e = 0; e < m; ++e) {
            g.insert_edge(rng.next_subset(n, 2));
        }
        vertex_counts[static_cast<size_t>(trial)] = n;
        edge_totals[static_cast<size_t>(trial)] = m;
        try {
            const auto core = two_core(g);
            core_sizes[static_cast<size_t>(trial)] =
                static_cast<long long>(core.size());
            agree[static_cast<size_t>(trial)] = 1;
        } catch (const std::logic_error&) {
            agree[static_cast<size_t>(trial)] = 0;
        }
    });

    Report report;
    report.config = cfg;
    long long agreed = 0;
    std::ostringstream csv;
    csv << "trial,n,edges,core_size\n";
    for (size_t i = 0; i < trials; ++i) {
        agreed += agree[i];
        csv << i << ',' << vertex_counts[i] << ',' << edge_totals[i] << ','
            << core_sizes[i] << "\n";
    }
    report.trial_csv = csv.str();
    report.comparisons.push_back(make_threshold(
        "core_route_agreement", "degree-1 peel vs dual collapse", 1.0,
        static_cast<double>(agreed) / static_cast<double>(trials)));
    return report;
}

Report run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.kind) {
        case ExperimentKind::StaticLimit:
        case ExperimentKind::JumpCoinflip:
            return run_static_limit(cfg);
        case ExperimentKind::ProcessPath:
            return run_process_path(cfg);
        case ExperimentKind::DomainMicroscopic:
        case ExperimentKind::DomainMacroscopic:
            return run_domain_experiments(cfg);
        case ExperimentKind::CoreCheck:
            return run_core_check(cfg);
    }
    throw ConfigError("unhandled experiment kind");
}

} // namespace hyperproc
