#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hyperproc/chain.hpp"
#include "hyperproc/collapse.hpp"
#include "hyperproc/experiment.hpp"
#include "hyperproc/io.hpp"
#include "hyperproc/sampler.hpp"
#include "hyperproc/stats.hpp"
#include "hyperproc/structure.hpp"
#include "hyperproc/walks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hyperproc;

namespace {

MixingDistribution mixture_from_option(const std::string& rho_text, bool probability) {
    const auto coeffs = coefficients_from_json_text(rho_text);
    return probability ? MixingDistribution::probability(coeffs)
                       : MixingDistribution::intensity(coeffs);
}

Hypergraph load_hypergraph(const std::string& path) {
    const std::string contents = read_file(path);
    const auto first = contents.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && contents[first] == '{') {
        return hypergraph_from_json(json::parse(contents));
    }
    return hypergraph_from_text(contents);
}

void emit(const std::string& out_path, const std::string& contents) {
    if (out_path.empty()) {
        std::cout << contents;
        if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
    } else {
        write_file(out_path, contents);
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) grid.push_back(std::stod(item));
    }
    return grid;
}

json collapse_to_json(const CollapseResult& r, bool with_trace) {
    json j;
    j["identifiable_vertices"] = r.identifiable_vertices;
    j["identifiable_vertex_count"] = r.identifiable_vertices.size();
    j["identifiable_edge_count"] = r.identifiable_edge_count;
    j["residual"] = to_json(r.residual);
    if (with_trace) {
        j["trace"] = {{"chosen", r.trace.chosen},
                      {"patch_counts", r.trace.patch_counts},
                      {"debris_counts", r.trace.debris_counts}};
    }
    return j;
}

int run_analyze(const std::string& rho_text, const std::string& out_dir,
                int table_points, double t_max) {
    const auto rho = mixture_from_option(rho_text, true);
    const StructureProfile profile = analyze_structure(rho);
    const json profile_json = to_json(profile);

    std::string table_csv;
    if (table_points > 0) {
        std::vector<double> times(static_cast<size_t>(table_points));
        for (int i = 0; i < table_points; ++i) {
            times[static_cast<size_t>(i)] =
                t_max * static_cast<double>(i) / (table_points - 1 ? table_points - 1 : 1);
        }
        table_csv = envelope_table_csv(envelope_table(rho, times));
    }

    if (out_dir.empty()) {
        std::cout << profile_json.dump(2) << "\n";
        if (!table_csv.empty()) std::cout << table_csv;
    } else {
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / "profile.json").string(), profile_json.dump(2) + "\n");
        if (!table_csv.empty()) {
            write_file((fs::path(out_dir) / "envelopes.csv").string(), table_csv);
        }
        std::cout << "classification: " << to_string(profile.classification) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson hypergraph process simulation and analysis"};
    app.require_subcommand(1);

    // analyze
    std::string an_rho, an_out;
    int an_table = 0;
    double an_tmax = 3.0;
    auto* analyze_cmd = app.add_subcommand("analyze", "structure profile of a mixture");
    analyze_cmd->add_option("--rho", an_rho, "coefficients as a JSON array")->required();
    analyze_cmd->add_option("--out", an_out, "output directory");
    analyze_cmd->add_option("--table", an_table, "rows of the (s,g,g*) table");
    analyze_cmd->add_option("--t-max", an_tmax, "table time horizon");

    // sample
    std::string sm_rho, sm_out, sm_format = "text";
    long long sm_n = 0;
    double sm_t = 1.0;
    uint64_t sm_seed = 0;
    auto* sample_cmd = app.add_subcommand("sample", "draw a static random hypergraph");
    sample_cmd->add_option("--rho", sm_rho, "coefficients as a JSON array")->required();
    sample_cmd->add_option("--n", sm_n, "vertex count")->required();
    sample_cmd->add_option("--t", sm_t, "time (edge intensity scale)");
    sample_cmd->add_option("--seed", sm_seed, "random seed");
    sample_cmd->add_option("--out", sm_out, "output file");
    sample_cmd->add_option("--format", sm_format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // process
    std::string pr_rho, pr_out, pr_grid;
    long long pr_n = 0;
    double pr_horizon = 1.0;
    uint64_t pr_seed = 0;
    auto* process_cmd = app.add_subcommand("process", "draw an event stream");
    process_cmd->add_option("--rho", pr_rho, "coefficients as a JSON array")->required();
    process_cmd->add_option("--n", pr_n, "vertex count")->required();
    process_cmd->add_option("--horizon", pr_horizon, "time horizon");
    process_cmd->add_option("--seed", pr_seed, "random seed");
    process_cmd->add_option("--grid", pr_grid, "comma-separated path times");
    process_cmd->add_option("--out", pr_out, "output directory");

    // collapse / domain / core
    std::string cl_in, cl_out;
    std::optional<uint64_t> cl_seed;
    bool cl_trace = false;
    auto* collapse_cmd = app.add_subcommand("collapse", "collapse a hypergraph file");
    collapse_cmd->add_option("--in", cl_in, "hypergraph file (text or json)")->required();
    collapse_cmd->add_option("--seed", cl_seed, "randomized patch order seed");
    collapse_cmd->add_flag("--trace", cl_trace, "include the (Y,Z) trace");
    collapse_cmd->add_option("--out", cl_out, "output file");

    std::string dm_in, dm_out;
    int dm_v0 = 0;
    auto* domain_cmd = app.add_subcommand("domain", "domain of a vertex");
    domain_cmd->add_option("--in", dm_in, "hypergraph file")->required();
    domain_cmd->add_option("--v0", dm_v0, "root vertex")->required();
    domain_cmd->add_option("--out", dm_out, "output file");

    std::string co_in, co_out;
    auto* core_cmd = app.add_subcommand("core", "2-core of a multigraph");
    core_cmd->add_option("--in", co_in, "hypergraph file")->required();
    core_cmd->add_option("--out", co_out, "output file");

    // walk
    std::string wk_out, wk_grid = "1.0";
    double wk_rho2 = 1.0;
    long long wk_trials = 1000, wk_cap = 0;
    uint64_t wk_seed = 0;
    auto* walk_cmd = app.add_subcommand("walk", "coupled first-passage walks");
    walk_cmd->add_option("--rho2", wk_rho2, "pair intensity");
    walk_cmd->add_option("--grid", wk_grid, "comma-separated times");
    walk_cmd->add_option("--trials", wk_trials, "number of families");
    walk_cmd->add_option("--cap", wk_cap, "step cap (0 = default)");
    walk_cmd->add_option("--seed", wk_seed, "random seed");
    walk_cmd->add_option("--out", wk_out, "output directory");

    // chain
    std::string ch_rho, ch_out;
    long long ch_n = 0, ch_trials = 1000, ch_steps = 5, ch_y0 = 1;
    double ch_t = 1.0;
    uint64_t ch_seed = 0;
    bool ch_sample_y0 = false;
    auto* chain_cmd = app.add_subcommand("chain", "randomized-collapse counting chain");
    chain_cmd->add_option("--rho", ch_rho, "coefficients as a JSON array")->required();
    chain_cmd->add_option("--n", ch_n, "vertex count")->required();
    chain_cmd->add_option("--t", ch_t, "time (intensity scale)");
    chain_cmd->add_option("--steps", ch_steps, "steps to record");
    chain_cmd->add_option("--trials", ch_trials, "number of chains");
    chain_cmd->add_option("--y0", ch_y0, "initial patch count");
    chain_cmd->add_flag("--sample-y0", ch_sample_y0,
                        "draw Y0 as 1 + Poisson(N t rho1)");
    chain_cmd->add_option("--seed", ch_seed, "random seed");
    chain_cmd->add_option("--out", ch_out, "output directory");

    // experiment
    std::string ex_config, ex_out;
    bool ex_serial = false;
    auto* experiment_cmd = app.add_subcommand("experiment", "run a config-driven study");
    experiment_cmd->add_option("config", ex_config, "config JSON path")->required();
    experiment_cmd->add_option("--out", ex_out, "override output directory");
    experiment_cmd->add_flag("--serial", ex_serial, "disable trial parallelism");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze_cmd) return run_analyze(an_rho, an_out, an_table, an_tmax);

        if (*sample_cmd) {
            const auto beta =
                mixture_from_option(sm_rho, false).scaled(sm_t);
            const Hypergraph h = sample_static(beta, static_cast<int>(sm_n), sm_seed);
            emit(sm_out, sm_format == "json" ? to_json(h).dump(2) : to_text(h));
            return 0;
        }

        if (*process_cmd) {
            const auto rho = mixture_from_option(pr_rho, true);
            const EventStream stream =
                sample_process(rho, static_cast<int>(pr_n), pr_horizon, pr_seed);
            const std::string csv = to_csv(stream);
            if (pr_out.empty()) {
                std::cout << csv;
            } else {
                fs::create_directories(pr_out);
                write_file((fs::path(pr_out) / "events.csv").string(), csv);
            }
            if (!pr_grid.empty()) {
                const auto path = identifiability_path(stream, parse_grid(pr_grid));
                std::ostringstream path_csv;
                path_csv << "t,T,Z\n";
                for (const auto& p : path) {
                    path_csv << format_double(p.time) << ','
                             << format_double(p.vertex_fraction) << ','
                             << format_double(p.edge_fraction) << "\n";
                }
                if (pr_out.empty()) {
                    std::cout << path_csv.str();
                } else {
                    write_file((fs::path(pr_out) / "path.csv").string(), path_csv.str());
                }
            }
            return 0;
        }

        if (*collapse_cmd) {
            const Hypergraph h = load_hypergraph(cl_in);
            const CollapseResult r =
                cl_seed.has_value() ? collapse(h, *cl_seed) : collapse(h);
            emit(cl_out, collapse_to_json(r, cl_trace).dump(2));
            return 0;
        }

        if (*domain_cmd) {
            const Hypergraph h = load_hypergraph(dm_in);
            const DomainResult result = domain_of(h, dm_v0);
            json j;
            j["root"] = dm_v0;
            j["domain"] = result.vertices;
            j["domain_size"] = result.vertices.size();
            j["identifiable_edge_count"] = result.identifiable_edge_count;
            emit(dm_out, j.dump(2));
            return 0;
        }

        if (*core_cmd) {
            const Hypergraph g = load_hypergraph(co_in);
            json j;
            j["core"] = two_core(g);
            emit(co_out, j.dump(2));
            return 0;
        }

        if (*walk_cmd) {
            const auto grid = parse_grid(wk_grid);
            const long long cap = wk_cap > 0
                                      ? wk_cap
                                      : default_step_cap(2.0 * wk_rho2 *
                                                          grid.back());
            std::ostringstream csv;
            csv << "trial,t,M\n";
            std::vector<long long> escaped(grid.size(), 0);
            std::vector<std::map<long long, long long>> hist(grid.size());
            for (long long trial = 0; trial < wk_trials; ++trial) {
                RngStream rng(wk_seed, static_cast<uint64_t>(trial));
                const WalkFamily family = coupled_family(grid, wk_rho2, cap, rng);
                for (size_t j = 0; j < grid.size(); ++j) {
                    const FirstPassage fp = family.passage[j];
                    csv << trial << ',' << format_double(grid[j]) << ',';
                    if (fp.escaped) {
                        csv << "inf";
                        ++escaped[j];
                    } else {
                        csv << fp.steps;
                        ++hist[j][fp.steps];
                    }
                    csv << "\n";
                }
            }
            json summary;
            summary["step_cap"] = cap;
            summary["times"] = json::array();
            for (size_t j = 0; j < grid.size(); ++j) {
                json tj;
                tj["t"] = grid[j];
                const double mu = 2.0 * wk_rho2 * grid[j];
                tj["offspring_mean"] = mu;
                tj["escape_frequency"] =
                    static_cast<double>(escaped[j]) / static_cast<double>(wk_trials);
                tj["escape_target"] = graph_envelope(wk_rho2, grid[j]);
                if (!hist[j].empty()) {
                    const auto cmp = compare_histogram_to_pmf(
                        hist[j], 1, 30,
                        [mu](long long n) { return borel_pmf(mu, n); });
                    tj["pmf_tv_on_1_30"] = cmp.tv_distance;
                }
                json pmf = json::object();
                for (const auto& [steps, count] : hist[j]) {
                    pmf[std::to_string(steps)] =
                        static_cast<double>(count) / static_cast<double>(wk_trials);
                }
                tj["empirical_pmf"] = pmf;
                summary["times"].push_back(tj);
            }
            if (wk_out.empty()) {
                std::cout << summary.dump(2) << "\n";
            } else {
                fs::create_directories(wk_out);
                write_file((fs::path(wk_out) / "walk_trials.csv").string(), csv.str());
                write_file((fs::path(wk_out) / "walk_summary.json").string(),
                           summary.dump(2) + "\n");
                std::cout << "wrote " << wk_out << "/walk_trials.csv and walk_summary.json\n";
            }
            return 0;
        }

        if (*chain_cmd) {
            const auto rho = mixture_from_option(ch_rho, true);
            std::ostringstream csv;
            csv << "trial,n,Y,Z\n";
            std::vector<double> mean_y(static_cast<size_t>(ch_steps) + 1, 0.0);
            std::vector<double> mean_z(static_cast<size_t>(ch_steps) + 1, 0.0);
            for (long long trial = 0; trial < ch_trials; ++trial) {
                RngStream rng(ch_seed, static_cast<uint64_t>(trial));
                ChainState state;
                state.num_vertices = ch_n;
                state.time = ch_t;
                state.patches =
                    ch_sample_y0
                        ? 1 + rng.next_poisson(static_cast<double>(ch_n) * ch_t *
                                               rho.rho1())
                        : ch_y0;
                csv << trial << ",0," << state.patches << ",0\n";
                mean_y[0] += static_cast<double>(state.patches);
                for (long long step = 1; step <= ch_steps; ++step) {
                    if (!state.stopped()) state = chain_step(state, rho, rng);
                    csv << trial << ',' << step << ',' << state.patches << ','
                        << state.debris << "\n";
                    mean_y[static_cast<size_t>(step)] += static_cast<double>(state.patches);
                    mean_z[static_cast<size_t>(step)] += static_cast<double>(state.debris);
                }
            }
            json summary;
            summary["steps"] = json::array();
            for (long long step = 0; step <= ch_steps; ++step) {
                json sj;
                sj["n"] = step;
                sj["mean_Y"] = mean_y[static_cast<size_t>(step)] /
                               static_cast<double>(ch_trials);
                sj["mean_Z"] = mean_z[static_cast<size_t>(step)] /
                               static_cast<double>(ch_trials);
                summary["steps"].push_back(sj);
            }
            summary["limit_pair_rate"] = 2.0 * rho.rho2();
            if (ch_out.empty()) {
                std::cout << summary.dump(2) << "\n";
            } else {
                fs::create_directories(ch_out);
                write_file((fs::path(ch_out) / "chain_trials.csv").string(), csv.str());
                write_file((fs::path(ch_out) / "chain_summary.json").string(),
                           summary.dump(2) + "\n");
                std::cout << "wrote " << ch_out << "/chain_trials.csv and chain_summary.json\n";
            }
            return 0;
        }

        if (*experiment_cmd) {
            const json config_json = json::parse(read_file(ex_config));
            ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
            if (!ex_out.empty()) cfg.out_dir = ex_out;
            if (ex_serial) cfg.parallel = false;
            const Report report = run_experiment(cfg);
            for (const auto& c : report.comparisons) {
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                          << ": observed " << format_double(c.observed)
                          << " vs target " << format_double(c.target)
                          << " (tolerance " << format_double(c.tolerance)
                          << ", target from " << c.target_source << ")\n";
            }
            if (!cfg.out_dir.empty()) {
                fs::create_directories(cfg.out_dir);
                json report_json = report.to_json();
                write_file((fs::path(cfg.out_dir) / "report.json").string(),
                           report_json.dump(2) + "\n");
                if (!report.trial_csv.empty()) {
                    write_file((fs::path(cfg.out_dir) / "trials.csv").string(),
                               report.trial_csv);
                }
            }
            return report.all_pass() ? 0 : 1;
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
    return 0;
}
