#include "smdplab/analysis.hpp"
#include "smdplab/model_io.hpp"
#include "smdplab/runner.hpp"
#include "smdplab/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"smdplab: regret benchmarks for episodic learning with temporally "
                 "extended actions"};
    app.set_version_flag("--version", smdplab::kVersion);
    app.require_subcommand(1);

    // run <config>
    auto* run = app.add_subcommand("run", "execute a seeded experiment batch from a config");
    std::string config_path;
    smdplab::RunnerOverrides overrides;
    std::string out_dir;
    run->add_option("config", config_path, "config file (json)")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--seed-offset", overrides.seed_offset, "added to every seed");
    run->add_option("--workers", overrides.workers, "worker pool size (default: cores)");
    run->add_flag("--plot", overrides.plot, "emit the regret plot");

    // compare <dirs...>
    auto* compare = app.add_subcommand("compare", "compare regret curves of finished runs");
    std::vector<std::string> dirs;
    std::string compare_out = "compare.csv";
    compare->add_option("dirs", dirs, "run output directories")->required()->expected(-2);
    compare->add_option("--out", compare_out, "comparison table path");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate the regret-shape calculators");
    double S = 1, O = 1, K = 1, d = 1, t_bar = 1, tau_bar = 1, H = 1;
    double S_o = 1, A_o = 1, H_o = 1, A = 1, alpha = 1, delta = 0.1;
    double tau_min = 1, tau_max = 1, tau_expect_min = 1;
    std::string bounds_csv;
    bounds->add_option("--S", S, "states");
    bounds->add_option("--O", O, "options");
    bounds->add_option("--K", K, "episodes");
    bounds->add_option("--d", d, "decisions per episode");
    bounds->add_option("--t-bar", t_bar, "worst-cell sqrt second moment of the duration");
    bounds->add_option("--tau-bar", tau_bar, "average duration");
    bounds->add_option("--H", H, "horizon");
    bounds->add_option("--S-o", S_o, "sub-problem states");
    bounds->add_option("--A-o", A_o, "sub-problem actions");
    bounds->add_option("--H-o", H_o, "sub-problem horizon");
    bounds->add_option("--A", A, "primitive actions");
    bounds->add_option("--alpha", alpha, "sub-problem scale");
    bounds->add_option("--delta", delta, "failure probability");
    bounds->add_option("--tau-min", tau_min, "shortest duration");
    bounds->add_option("--tau-max", tau_max, "longest duration");
    bounds->add_option("--tau-expect-min", tau_expect_min, "smallest expected duration");
    bounds->add_option("--csv", bounds_csv, "also write the report as csv");

    // validate <model-file>
    auto* validate = app.add_subcommand("validate", "check a model file's invariants");
    std::string model_path;
    validate->add_option("model", model_path, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (!out_dir.empty()) overrides.out_dir = out_dir;
            return smdplab::run_experiment(config_path, overrides);
        }
        if (*compare) return smdplab::compare_runs(dirs, compare_out);
        if (*bounds) {
            const auto report = smdplab::make_bound_report(
                S, O, K, d, t_bar, tau_bar, H, S_o, A_o, H_o, A, alpha, delta, tau_min,
                tau_max, tau_expect_min);
            std::cout << report.text();
            if (!bounds_csv.empty()) {
                std::ofstream out(bounds_csv);
                out << report.csv();
            }
            return 0;
        }
        if (*validate) {
            const auto env = smdplab::load_model_file(model_path);
            auto report = smdplab::validate_mdp(env.mdp);
            const auto option_report = smdplab::validate_option_set(env.options, env.mdp);
            report.violations.insert(report.violations.end(),
                                     option_report.violations.begin(),
                                     option_report.violations.end());
            if (report.ok()) {
                std::cout << "model ok: S=" << env.mdp.num_states()
                          << " A=" << env.mdp.num_actions() << " H=" << env.mdp.horizon()
                          << " options=" << env.options.size() << "\n";
                return 0;
            }
            std::cerr << report.joined();
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
