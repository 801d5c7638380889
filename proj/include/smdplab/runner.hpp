#pragma once

#include "smdplab/agents.hpp"
#include "smdplab/analysis.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace smdplab {

/// Scaffolds recovered from goal-reaching options: the states an option can
/// start from plus its unique termination state, with a shorter horizon.
std::vector<OptionScaffold> scaffolds_from_options(const OptionSet& options, int sub_horizon);

struct EnvSpec {
    std::string preset;  // chain | four-rooms | file
    int length = 8;
    int room = 5;
    int horizon = 12;
    Real noise = 0.1;
    int max_advance = 3;
    std::string path;  // for preset "file"
};

struct RunSpec {
    std::string name;
    std::string agent;  // smdp-ucrl | flat-ucrl | two-phase
    int episodes = 100;
    Real delta = 0.1;
    int support_size = -1;
    EnvSpec env;
    std::string options_preset = "default";  // default | primitive | geo
    std::vector<Real> geo_betas;
    int scaffold_horizon = 0;  // two-phase; 0 = env horizon
    int budget = 0;            // two-phase override; 0 = closed-form allocation
};

struct ExperimentConfig {
    std::string out_dir = "out";
    std::vector<std::uint64_t> seeds;
    bool plot = false;
    bool bounds_report = false;
    std::vector<RunSpec> runs;
};

struct RunnerOverrides {
    std::optional<std::string> out_dir;
    std::uint64_t seed_offset = 0;
    int workers = 0;  // 0 = hardware concurrency
    bool plot = false;
};

/// Parse and validate a config document; unknown keys are hard errors.
ExperimentConfig parse_experiment_config(const std::string& json_text);

Environment build_environment(const RunSpec& spec);
RunLog execute_run(const RunSpec& spec, std::uint64_t seed);

/// Run every (run, seed) job, write one CSV per job plus summary, manifest
/// and optional bound report and plot. Returns a process exit status.
int run_experiment(const std::string& config_path, const RunnerOverrides& overrides);

/// Side-by-side regret comparison of previously written run directories.
int compare_runs(const std::vector<std::string>& dirs, const std::string& out_path);

void write_runlog_csv(const std::string& path, const RunLog& log);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace smdplab
