#ifndef HYPERPROC_EXPERIMENT_HPP
#define HYPERPROC_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperproc/mixing.hpp"

namespace hyperproc {

enum class ExperimentKind {
    StaticLimit,        // fixed-time identifiable fractions vs fluid atoms
    ProcessPath,        // whole-path identifiability vs the lower envelope
    JumpCoinflip,       // fixed-time run at the located jump of g
    DomainMicroscopic,  // patch-free domain sizes vs the total-progeny law
    DomainMacroscopic,  // patch-free giant-domain frequency and size
    CoreCheck,          // 2-core peel vs dual-collapse agreement sweep
};

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::StaticLimit;
    std::vector<double> rho;
    long long num_vertices = 0;
    std::vector<double> time_grid;
    long long trials = 0;
    uint64_t master_seed = 0;
    bool parallel = true;
    int root_vertex = 0;
    std::map<std::string, double> tolerances;  // overrides of the defaults below
    std::string out_dir;
    std::string format = "json";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;

    double tolerance(const std::string& name, double fallback) const;
};

// One named check of an empirical quantity against an analytic target. The
// target is recomputed from the analysis modules at run time;
// target_source records which formula produced it.
struct Comparison {
    std::string name;
    std::string target_source;
    double target = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    int schema_version = 1;
    ExperimentConfig config;
    std::vector<Comparison> comparisons;
    nlohmann::json details;
    std::string trial_csv;  // per-trial records, kind-specific columns

    bool all_pass() const;
    nlohmann::json to_json() const;  // deterministic: no timestamps
};

Report run_experiment(const ExperimentConfig& cfg);

Report run_static_limit(const ExperimentConfig& cfg);
Report run_process_path(const ExperimentConfig& cfg);
Report run_domain_experiments(const ExperimentConfig& cfg);
Report run_core_check(const ExperimentConfig& cfg);

} // namespace hyperproc

#endif
