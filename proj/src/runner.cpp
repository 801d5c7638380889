#include "smdplab/runner.hpp"

#include "smdplab/model_io.hpp"
#include "smdplab/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace smdplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_real(Real x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
}

EnvSpec parse_env(const json& j) {
    check_keys(j, {"preset", "length", "room", "horizon", "noise", "max_advance", "path"},
               "env");
    EnvSpec env;
    env.preset = j.at("preset").get<std::string>();
    if (env.preset == "chain") {
        env.length = j.value("length", env.length);
        env.horizon = j.at("horizon").get<int>();
        env.noise = j.value("noise", env.noise);
        env.max_advance = j.value("max_advance", env.max_advance);
    } else if (env.preset == "four-rooms") {
        env.room = j.value("room", env.room);
        env.horizon = j.at("horizon").get<int>();
        env.noise = j.value("noise", 0.0);
    } else if (env.preset == "file") {
        env.path = j.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("config: unknown env preset '" + env.preset + "'");
    }
    return env;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

struct JobResult {
    std::vector<Real> regret_cum;
    Real v_star = 0.0;
    Real bias = 0.0;
};

struct BoundsInputs {
    int S = 0, A = 0, O = 0, H = 0;
    Real t_bar = 1.0, tau_bar = 1.0, tau_min = 1.0, tau_max = 1.0, tau_expect_min = 1.0;
    int S_o = 1, A_o = 1, H_o = 1;
};

BoundsInputs collect_bounds_inputs(const RunSpec& spec) {
    BoundsInputs b;
    Environment env = build_environment(spec);
    b.S = env.mdp.num_states();
    b.A = env.mdp.num_actions();
    b.H = env.mdp.horizon();
    b.O = spec.agent == "flat-ucrl" ? env.mdp.num_actions() : env.options.size();
    if (spec.agent != "flat-ucrl" && env.options.size() > 0) {
        const OptionStatsSummary stats = option_stats(flatten_to_smdp(env.mdp, env.options));
        b.t_bar = stats.t_bar;
        b.tau_bar = stats.tau_mean;
        b.tau_min = std::max(stats.tau_min, 1.0);
        b.tau_max = stats.tau_max;
        Real lo = 0.0;
        for (const Real m : stats.per_option_mean)
            if (m > 0.0) lo = lo == 0.0 ? m : std::min(lo, m);
        b.tau_expect_min = std::clamp(lo, b.tau_min, b.tau_max);
    }
    if (spec.agent == "two-phase") {
        const int sub_h = spec.scaffold_horizon > 0 ? spec.scaffold_horizon : b.H;
        for (const auto& sc : scaffolds_from_options(env.options, sub_h)) {
            b.S_o = std::max(b.S_o, static_cast<int>(sc.states.size()));
            b.A_o = std::max(b.A_o, static_cast<int>(sc.actions.size()));
            b.H_o = std::max(b.H_o, sc.horizon);
        }
    }
    return b;
}

std::string svg_plot(const std::map<std::string, std::vector<Real>>& curves,
                     const std::optional<std::vector<Real>>& shape_curve) {
    const int width = 720, height = 480, margin = 56;
    std::size_t max_len = 1;
    Real max_y = 1e-12;
    for (const auto& [name, ys] : curves) {
        max_len = std::max(max_len, ys.size());
        for (const Real y : ys) max_y = std::max(max_y, y);
    }
    const auto sx = [&](std::size_t k) {
        return margin + (width - 2.0 * margin) * static_cast<Real>(k) /
                            static_cast<Real>(std::max<std::size_t>(max_len - 1, 1));
    };
    const auto sy = [&](Real y) { return height - margin - (height - 2.0 * margin) * y / max_y; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">episode</text>\n";
    out << "<text x=\"16\" y=\"" << height / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << height / 2 << ")\">cumulative regret</text>\n";
    char num[40];
    std::snprintf(num, sizeof(num), "%.3g", max_y);
    out << "<text x=\"" << margin - 4 << "\" y=\"" << margin
        << "\" font-size=\"11\" text-anchor=\"end\">" << num << "</text>\n";
    out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
        << "\" font-size=\"11\" text-anchor=\"end\">" << max_len << "</text>\n";

    int color = 0;
    int legend_y = margin;
    auto draw = [&](const std::string& name, const std::vector<Real>& ys, bool dashed) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[color % 7] << "\" stroke-width=\"1.5\"";
        if (dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t k = 0; k < ys.size(); ++k)
            out << sx(k) << ',' << sy(std::max(0.0, std::min(ys[k], max_y))) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << width - margin - 160 << "\" y=\"" << legend_y
            << "\" font-size=\"12\" fill=\"" << palette[color % 7] << "\">" << name
            << "</text>\n";
        legend_y += 16;
        ++color;
    };
    for (const auto& [name, ys] : curves) draw(name, ys, false);
    if (shape_curve) draw("option-dependent shape (scaled)", *shape_curve, true);
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::vector<OptionScaffold> scaffolds_from_options(const OptionSet& options, int sub_horizon) {
    std::vector<OptionScaffold> out;
    for (int o = 0; o < options.size(); ++o) {
        const OptionSpec& opt = options[o];
        const int S = static_cast<int>(opt.termination.rows());
        OptionScaffold sc;
        sc.id = opt.id;
        sc.horizon = sub_horizon;
        int target = -1;
        for (int s = 0; s < S; ++s) {
            if (opt.beta(s, 1) >= 1.0) {
                require(target < 0, "scaffolds_from_options: option '" + opt.id +
                                        "' terminates at more than one state");
                target = s;
            }
        }
        require(target >= 0, "scaffolds_from_options: option '" + opt.id +
                                 "' has no state-based termination target");
        std::set<int> states;
        states.insert(target);
        for (int s = 0; s < S; ++s)
            if (opt.initiable(s, 1)) states.insert(s);
        sc.states.assign(states.begin(), states.end());
        sc.target_state = target;
        sc.start_state = sc.states.front();
        sc.loiter_at_target = opt.initiable(target, 1);
        const int A = opt.internal_policy.maxCoeff() + 1;
        sc.actions.resize(std::max(A, 1));
        for (std::size_t a = 0; a < sc.actions.size(); ++a) sc.actions[a] = static_cast<int>(a);
        out.push_back(std::move(sc));
    }
    return out;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root = json::parse(json_text);
    check_keys(root, {"out_dir", "seeds", "plot", "bounds_report", "runs"}, "the top level");
    ExperimentConfig cfg;
    cfg.out_dir = root.value("out_dir", cfg.out_dir);
    cfg.plot = root.value("plot", false);
    cfg.bounds_report = root.value("bounds_report", false);
    if (!root.contains("seeds") || !root["seeds"].is_array() || root["seeds"].empty())
        throw std::invalid_argument("config: 'seeds' must be a non-empty array");
    std::set<std::uint64_t> seen;
    for (const auto& s : root["seeds"]) {
        const auto seed = s.get<std::uint64_t>();
        if (!seen.insert(seed).second)
            throw std::invalid_argument("config: 'seeds' must be distinct");
        cfg.seeds.push_back(seed);
    }
    if (!root.contains("runs") || !root["runs"].is_array() || root["runs"].empty())
        throw std::invalid_argument("config: 'runs' must be a non-empty array");
    std::set<std::string> names;
    for (const auto& r : root["runs"]) {
        check_keys(r,
                   {"name", "agent", "episodes", "delta", "support_size", "env", "options",
                    "geo_betas", "scaffold_horizon", "budget"},
                   "a run");
        RunSpec spec;
        spec.name = r.at("name").get<std::string>();
        if (!names.insert(spec.name).second)
            throw std::invalid_argument("config: duplicate run name '" + spec.name + "'");
        spec.agent = r.at("agent").get<std::string>();
        if (spec.agent != "smdp-ucrl" && spec.agent != "flat-ucrl" && spec.agent != "two-phase")
            throw std::invalid_argument("config: unknown agent '" + spec.agent + "' in run '" +
                                        spec.name + "'");
        spec.episodes = r.at("episodes").get<int>();
        if (spec.episodes < 1)
            throw std::invalid_argument("config: 'episodes' must be positive in run '" +
                                        spec.name + "'");
        spec.delta = r.value("delta", spec.delta);
        if (spec.delta <= 0.0 || spec.delta >= 1.0)
            throw std::invalid_argument("config: 'delta' must lie in (0,1) in run '" +
                                        spec.name + "'");
        spec.support_size = r.value("support_size", -1);
        spec.env = parse_env(r.at("env"));
        spec.options_preset = r.value("options", std::string("default"));
        if (spec.options_preset != "default" && spec.options_preset != "primitive" &&
            spec.options_preset != "geo")
            throw std::invalid_argument("config: unknown options preset '" +
                                        spec.options_preset + "' in run '" + spec.name + "'");
        if (r.contains("geo_betas"))
            for (const auto& b : r["geo_betas"]) spec.geo_betas.push_back(b.get<Real>());
        spec.scaffold_horizon = r.value("scaffold_horizon", 0);
        spec.budget = r.value("budget", 0);
        cfg.runs.push_back(std::move(spec));
    }
    return cfg;
}

Environment build_environment(const RunSpec& spec) {
    Environment env;
    if (spec.env.preset == "chain") {
        env = make_chain_env(spec.env.length, spec.env.horizon, spec.env.noise,
                             spec.env.max_advance);
    } else if (spec.env.preset == "four-rooms") {
        env = make_four_rooms_env(spec.env.room, spec.env.horizon, spec.env.noise);
    } else {
        env = load_model_file(spec.env.path);
    }
    if (spec.options_preset == "primitive") {
        env.options = make_primitive_options(env.mdp);
    } else if (spec.options_preset == "geo") {
        require(!spec.geo_betas.empty(), "config: options preset 'geo' needs 'geo_betas'");
        env.options = make_geo_options(env.mdp, spec.geo_betas);
    }
    return env;
}

RunLog execute_run(const RunSpec& spec, std::uint64_t seed) {
    Environment env = build_environment(spec);
    RunConfig config;
    config.episodes = spec.episodes;
    config.delta = spec.delta;
    config.seed = seed;
    config.support_size = spec.support_size;
    if (spec.agent == "flat-ucrl") return run_flat_ucrl(env.mdp, config);
    if (spec.agent == "smdp-ucrl") return run_fh_smdp_ucrl(env.mdp, env.options, config);
    const int sub_h =
        spec.scaffold_horizon > 0 ? spec.scaffold_horizon : env.mdp.horizon();
    const auto scaffolds = scaffolds_from_options(env.options, sub_h);
    std::vector<int> budgets;
    if (spec.budget > 0) budgets.assign(scaffolds.size(), spec.budget);
    return run_two_phase(env.mdp, scaffolds, config, budgets);
}

void write_runlog_csv(const std::string& path, const RunLog& log) {
    std::ofstream out(path);
    require(out.good(), "cannot open output file: " + path);
    out << "episode,phase,d_k,return,v_opt,v_policy,regret_inc,regret_cum\n";
    for (const auto& rec : log.episodes) {
        out << rec.episode << ',' << rec.phase << ',' << rec.decisions << ','
            << fmt_real(rec.ret) << ',' << fmt_real(rec.v_opt) << ',' << fmt_real(rec.v_policy)
            << ',' << fmt_real(rec.regret_inc) << ',' << fmt_real(rec.regret_cum) << '\n';
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open csv file: " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

int run_experiment(const std::string& config_path, const RunnerOverrides& overrides) {
    ExperimentConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in.good()) {
            std::cerr << "cannot open config file: " << config_path << "\n";
            return 2;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        cfg = parse_experiment_config(buffer.str());
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
    if (overrides.plot) cfg.plot = true;
    if (overrides.seed_offset != 0)
        for (auto& s : cfg.seeds) s += overrides.seed_offset;

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory '" << cfg.out_dir << "': " << ec.message()
                  << "\n";
        return 2;
    }

    struct Job {
        const RunSpec* spec;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& run : cfg.runs)
        for (const auto seed : cfg.seeds) jobs.push_back({&run, seed});

    std::map<std::pair<std::string, std::uint64_t>, JobResult> results;
    std::mutex mtx;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers =
        std::max(1, std::min<int>(overrides.workers > 0 ? overrides.workers : std::max(hw, 1),
                                  static_cast<int>(jobs.size())));
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size() || failed.load()) break;
            const Job& job = jobs[i];
            try {
                RunLog log = execute_run(*job.spec, job.seed);
                const std::string stem =
                    cfg.out_dir + "/" + job.spec->name + "_seed" + std::to_string(job.seed);
                write_runlog_csv(stem + ".csv", log);
                std::ofstream stats_out(stem + ".stats");
                log.final_stats.save(stats_out);
                JobResult res;
                res.v_star = log.v_star;
                res.bias = log.bias;
                res.regret_cum.reserve(log.episodes.size());
                for (const auto& rec : log.episodes) res.regret_cum.push_back(rec.regret_cum);
                std::lock_guard<std::mutex> lock(mtx);
                results[{job.spec->name, job.seed}] = std::move(res);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mtx);
                failed = true;
                failure = "run '" + job.spec->name + "' seed " + std::to_string(job.seed) +
                          " failed: " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failed) {
        std::cerr << failure << "\n";
        return 1;
    }

    // summary: mean and stddev of cumulative regret per episode across seeds
    {
        std::ofstream out(cfg.out_dir + "/summary.csv");
        out << "run,episode,regret_cum_mean,regret_cum_std\n";
        for (const auto& run : cfg.runs) {
            std::size_t episodes = 0;
            for (const auto seed : cfg.seeds)
                episodes = std::max(episodes, results[{run.name, seed}].regret_cum.size());
            for (std::size_t k = 0; k < episodes; ++k) {
                Real mean = 0.0;
                for (const auto seed : cfg.seeds)
                    mean += results[{run.name, seed}].regret_cum[k];
                mean /= static_cast<Real>(cfg.seeds.size());
                Real var = 0.0;
                for (const auto seed : cfg.seeds) {
                    const Real d = results[{run.name, seed}].regret_cum[k] - mean;
                    var += d * d;
                }
                var = cfg.seeds.size() > 1 ? var / static_cast<Real>(cfg.seeds.size() - 1) : 0.0;
                out << run.name << ',' << k + 1 << ',' << fmt_real(mean) << ','
                    << fmt_real(std::sqrt(var)) << '\n';
            }
        }
    }

    // manifest: canonical config echo, hash, tool version, produced files
    {
        json manifest;
        json canonical;
        canonical["out_dir"] = cfg.out_dir;
        canonical["seeds"] = cfg.seeds;
        canonical["plot"] = cfg.plot;
        canonical["bounds_report"] = cfg.bounds_report;
        json runs = json::array();
        for (const auto& run : cfg.runs) {
            json r;
            r["name"] = run.name;
            r["agent"] = run.agent;
            r["episodes"] = run.episodes;
            r["delta"] = run.delta;
            r["support_size"] = run.support_size;
            r["env"] = {{"preset", run.env.preset},   {"length", run.env.length},
                        {"room", run.env.room},       {"horizon", run.env.horizon},
                        {"noise", run.env.noise},     {"max_advance", run.env.max_advance},
                        {"path", run.env.path}};
            r["options"] = run.options_preset;
            r["geo_betas"] = run.geo_betas;
            r["scaffold_horizon"] = run.scaffold_horizon;
            r["budget"] = run.budget;
            runs.push_back(r);
        }
        canonical["runs"] = runs;
        manifest["config"] = canonical;
        manifest["config_hash"] = fnv1a(canonical.dump());
        manifest["version"] = kVersion;
        json inputs = json::array();
        for (const auto& run : cfg.runs) {
            const BoundsInputs b = collect_bounds_inputs(run);
            json j;
            j["run"] = run.name;
            j["S"] = b.S;
            j["A"] = b.A;
            j["O"] = b.O;
            j["H"] = b.H;
            j["t_bar"] = b.t_bar;
            j["tau_bar"] = b.tau_bar;
            j["tau_min"] = b.tau_min;
            j["tau_max"] = b.tau_max;
            j["tau_expect_min"] = b.tau_expect_min;
            j["S_o"] = b.S_o;
            j["A_o"] = b.A_o;
            j["H_o"] = b.H_o;
            j["v_star"] = results[{run.name, cfg.seeds.front()}].v_star;
            j["bias"] = results[{run.name, cfg.seeds.front()}].bias;
            inputs.push_back(j);
        }
        manifest["bounds_inputs"] = inputs;
        json files = json::array();
        for (const auto& run : cfg.runs)
            for (const auto seed : cfg.seeds) {
                files.push_back(run.name + "_seed" + std::to_string(seed) + ".csv");
                files.push_back(run.name + "_seed" + std::to_string(seed) + ".stats");
            }
        manifest["files"] = files;
        std::ofstream out(cfg.out_dir + "/manifest.json");
        out << manifest.dump(2) << "\n";
    }

    if (cfg.bounds_report) {
        std::ofstream txt(cfg.out_dir + "/bounds.txt");
        std::ofstream csv(cfg.out_dir + "/bounds.csv");
        bool first = true;
        for (const auto& run : cfg.runs) {
            const BoundsInputs b = collect_bounds_inputs(run);
            const Real alpha =
                run.agent == "two-phase" ? static_cast<Real>(b.H_o) / b.H : 1.0;
            const BoundReport report = make_bound_report(
                b.S, b.O, run.episodes, b.H / std::max(b.tau_bar, 1.0), b.t_bar,
                std::max(b.tau_bar, 1.0), b.H, b.S_o, b.A_o, b.H_o, b.A, alpha, run.delta,
                b.tau_min, b.tau_max, b.tau_expect_min);
            txt << "run " << run.name << "\n" << report.text() << "\n";
            const std::string block = report.csv();
            if (first) {
                csv << "run," << block.substr(0, block.find('\n')) << "\n";
                first = false;
            }
            csv << run.name << ',' << block.substr(block.find('\n') + 1);
        }
    }

    if (cfg.plot) {
        std::map<std::string, std::vector<Real>> curves;
        Real max_final = 0.0;
        std::size_t max_len = 1;
        for (const auto& run : cfg.runs) {
            std::vector<Real> mean;
            std::size_t episodes = 0;
            for (const auto seed : cfg.seeds)
                episodes = std::max(episodes, results[{run.name, seed}].regret_cum.size());
            mean.assign(episodes, 0.0);
            for (const auto seed : cfg.seeds)
                for (std::size_t k = 0; k < episodes; ++k)
                    mean[k] += results[{run.name, seed}].regret_cum[k] /
                               static_cast<Real>(cfg.seeds.size());
            if (!mean.empty()) max_final = std::max(max_final, mean.back());
            max_len = std::max(max_len, mean.size());
            curves[run.name] = std::move(mean);
        }
        // option-dependent shape sqrt(k), scaled to the largest final regret
        std::vector<Real> shape(max_len);
        for (std::size_t k = 0; k < max_len; ++k)
            shape[k] = max_final * std::sqrt(static_cast<Real>(k + 1) /
                                             static_cast<Real>(max_len));
        std::ofstream out(cfg.out_dir + "/regret.svg");
        out << svg_plot(curves, shape);
    }

    return 0;
}

int compare_runs(const std::vector<std::string>& dirs, const std::string& out_path) {
    if (dirs.size() < 2) {
        std::cerr << "compare needs at least two run directories\n";
        return 2;
    }
    struct Curve {
        std::string label;
        std::vector<Real> mean;
    };
    std::vector<Curve> curves;
    std::vector<int> horizons;
    for (const auto& dir : dirs) {
        CsvTable summary;
        try {
            summary = read_csv(dir + "/summary.csv");
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
        std::map<std::string, std::vector<Real>> per_run;
        for (const auto& row : summary.rows)
            per_run[row[0]].push_back(std::strtod(row[2].c_str(), nullptr));
        for (auto& [name, ys] : per_run)
            curves.push_back({dir + ":" + name, std::move(ys)});
        try {
            std::ifstream mf(dir + "/manifest.json");
            if (mf.good()) {
                json manifest = json::parse(mf);
                for (const auto& j : manifest["bounds_inputs"])
                    horizons.push_back(j["H"].get<int>());
            }
        } catch (...) {
            // manifest is optional for comparison
        }
    }
    if (!horizons.empty() &&
        !std::equal(horizons.begin() + 1, horizons.end(), horizons.begin())) {
        std::cerr << "compare: incompatible runs, horizons differ\n";
        return 2;
    }
    std::size_t episodes = 0;
    for (const auto& c : curves) episodes = std::max(episodes, c.mean.size());

    std::ofstream out(out_path);
    require(out.good(), "cannot open comparison output: " + out_path);
    out << "episode";
    for (const auto& c : curves) out << ',' << c.label;
    for (std::size_t i = 1; i < curves.size(); ++i)
        out << ",ratio:" << curves[i].label << "/" << curves[0].label;
    out << '\n';
    for (std::size_t k = 0; k < episodes; ++k) {
        out << k + 1;
        for (const auto& c : curves)
            out << ',' << (k < c.mean.size() ? fmt_real(c.mean[k]) : "");
        for (std::size_t i = 1; i < curves.size(); ++i) {
            const Real a = k < curves[i].mean.size() ? curves[i].mean[k] : 0.0;
            const Real b = k < curves[0].mean.size() ? curves[0].mean[k] : 0.0;
            out << ',' << (b != 0.0 ? fmt_real(a / b) : "");
        }
        out << '\n';
    }

    // report the first episode where each later curve drops below the first
    for (std::size_t i = 1; i < curves.size(); ++i) {
        long crossover = -1;
        const std::size_t n = std::min(curves[i].mean.size(), curves[0].mean.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (curves[i].mean[k] < curves[0].mean[k]) {
                crossover = static_cast<long>(k + 1);
                break;
            }
        }
        std::cout << curves[i].label << " vs " << curves[0].label << ": empirical crossover ";
        if (crossover > 0)
            std::cout << "at episode " << crossover << "\n";
        else
            std::cout << "not reached\n";
    }
    std::cout << "comparison table written to " << out_path << "\n";
    return 0;
}

}  // namespace smdplab
