// Acceptance suite: one criterion per check, one PASS/FAIL line each.
// Exit status 0 only if every criterion holds within its time budget.

#include "oracles.hpp"

#include "smdplab/agents.hpp"
#include "smdplab/analysis.hpp"
#include "smdplab/model_io.hpp"
#include "smdplab/planning.hpp"
#include "smdplab/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <vector>

using namespace smdplab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run_criterion(int id, const std::string& name, double budget_seconds,
                   const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool pass = outcome.pass && seconds <= budget_seconds;
    if (!pass) ++failures;
    std::printf("[%2d] %s  %s (%s; %.1fs of %.0fs budget)\n", id, pass ? "PASS" : "FAIL",
                name.c_str(), outcome.detail.c_str(), seconds, budget_seconds);
    std::fflush(stdout);
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int count = std::max(1, std::min(workers, n));
    for (int w = 0; w < count; ++w)
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[192];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

// Stochastic-duration chain set: a main macro that runs 4 or 5 stages from
// the 5-stage grid, plus a fixed 5-stage bridge admitting the early exits.
OptionSet four_or_five_options(const FhMdp& mdp, Real early_exit) {
    const int S = mdp.num_states();
    const int H = mdp.horizon();
    OptionSet set;
    OptionSpec main_opt("four-or-five", S, H);
    OptionSpec bridge("bridge-five", S, H);
    for (int h = 1; h <= H; ++h) {
        const int offset = (h - 1) % 5;
        for (int s = 0; s < S; ++s) {
            main_opt.set_action(s, h, 1);
            bridge.set_action(s, h, 1);
            if (h == H) {
                main_opt.set_beta(s, h, 1.0);
                bridge.set_beta(s, h, 1.0);
                continue;
            }
            if (offset == 0) {
                main_opt.set_beta(s, h, 1.0);
                main_opt.set_initiable(s, h);
                bridge.set_beta(s, h, 0.0);
            } else if (offset == 4) {
                main_opt.set_beta(s, h, early_exit);
                bridge.set_beta(s, h, 1.0);
                bridge.set_initiable(s, h);
            }
        }
    }
    set.options.push_back(std::move(main_opt));
    set.options.push_back(std::move(bridge));
    return set;
}

Outcome criterion_exact_planning() {
    Rng rng(1001);
    Real worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int S = 2 + rng.uniform_int(2);
        const int O = 1 + rng.uniform_int(2);
        const int H = 3 + rng.uniform_int(2);
        const FhSmdp smdp = oracles::random_smdp(S, O, H, rng);
        const auto sol = exact_backward_induction(smdp);
        const auto best = oracles::enumeration_vstar(smdp);
        for (int s = 0; s < S; ++s)
            worst = std::max(worst, std::abs(sol.v.at(s, 1) - best[s]));
    }
    return {worst <= 1e-12, fmt("max gap to enumeration %.2e over 50 models", worst)};
}

Outcome criterion_pdl() {
    Rng rng(1002);
    Real worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int S = 2 + rng.uniform_int(2);
        const int O = 1 + rng.uniform_int(2);
        const int H = 3 + rng.uniform_int(3);
        const FhSmdp a = oracles::random_smdp(S, O, H, rng);
        const FhSmdp b = oracles::random_smdp(S, O, H, rng);
        const auto policy = oracles::random_policy(a, rng);
        worst = std::max(worst, verify_pdl(a, b, policy).gap());
    }
    return {worst <= 1e-9, fmt("max identity gap %.2e over 100 pairs", worst)};
}

Outcome criterion_optimism() {
    const Environment env = make_chain_env(5, 9, 0.2);
    const OptionSet primitive = make_primitive_options(env.mdp);
    RunConfig config{200, 0.1, 7, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, primitive, config);
    long dominated = 0;
    for (const auto& rec : log.episodes)
        if (rec.v_opt >= log.v_star - 1e-9) ++dominated;
    const Real fraction = static_cast<Real>(dominated) / log.episodes.size();
    return {fraction >= 0.9, fmt("optimistic in %.1f%% of 200 episodes", 100 * fraction)};
}

Outcome criterion_l1_oracle() {
    Rng rng(1004);
    Real worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + rng.uniform_int(5);
        std::vector<Real> p(n), v(n);
        Real total = 0.0;
        for (int i = 0; i < n; ++i) {
            p[i] = rng.uniform() < 0.25 ? 0.0 : 0.01 + rng.uniform();
            total += p[i];
            v[i] = rng.uniform() * 10.0 - 5.0;
        }
        if (total == 0.0) p[0] = total = 1.0;
        for (auto& x : p) x /= total;
        const Real beta = rng.uniform() * 2.2;
        Vec pe(n), ve(n);
        for (int i = 0; i < n; ++i) pe(i) = p[i], ve(i) = v[i];
        const Real greedy = optimistic_row(pe, beta, ve).dot(ve);
        const Real lp = oracles::l1_ball_lp_oracle(p, beta, v);
        worst = std::max(worst, std::abs(greedy - lp));
    }
    return {worst <= 1e-9, fmt("max objective gap to the LP %.2e over 500 rows", worst)};
}

Outcome criterion_flat_reduction() {
    const int H = 12;
    const Environment env = make_chain_env(H, H, 0.25);
    const OptionSet primitive = make_primitive_options(env.mdp);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig config{300, 0.1, seed, -1};
        const RunLog hier = run_fh_smdp_ucrl(env.mdp, primitive, config);
        const RunLog flat = run_flat_ucrl(env.mdp, config);
        if (hier.episodes.size() != flat.episodes.size())
            return {false, "episode counts differ"};
        for (std::size_t k = 0; k < hier.episodes.size(); ++k) {
            const auto& a = hier.traces[k];
            const auto& b = flat.traces[k];
            if (a.decisions.size() != b.decisions.size())
                return {false, fmt("decision counts differ at episode %g", Real(k + 1))};
            for (std::size_t i = 0; i < a.decisions.size(); ++i) {
                const auto& x = a.decisions[i];
                const auto& y = b.decisions[i];
                if (x.o != y.o || x.s != y.s || x.s_next != y.s_next || x.h != y.h ||
                    x.reward != y.reward)
                    return {false, fmt("trajectories diverge at episode %g", Real(k + 1))};
            }
            if (hier.episodes[k].regret_inc != flat.episodes[k].regret_inc ||
                hier.episodes[k].regret_cum != flat.episodes[k].regret_cum)
                return {false, fmt("regret differs at episode %g", Real(k + 1))};
        }
    }
    return {true, "5 seeds x 300 episodes: action sequences and regret exactly equal"};
}

Outcome criterion_fixed_length() {
    Environment env = make_chain_env(6, 30, 0.3, 5);
    OptionSet only5;
    only5.options.push_back(env.options[4]);
    RunConfig config{200, 0.1, 3, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, only5, config);
    for (const auto& rec : log.episodes)
        if (rec.decisions != 6)
            return {false, fmt("saw %g decisions", Real(rec.decisions))};
    return {true, "d = 6 = H/tau on all 200 episodes"};
}

Outcome criterion_renewal() {
    const Environment env = make_chain_env(8, 30, 0.2);
    const OptionSet options = four_or_five_options(env.mdp, 0.35);
    {
        const auto report = validate_option_set(options, env.mdp);
        if (!report.ok()) return {false, "option set invalid: " + report.violations[0]};
    }
    const FhSmdp smdp = flatten_to_smdp(env.mdp, options);
    const OptionStatsSummary stats = option_stats(smdp);
    Real e_min = 0.0;
    for (const Real m : stats.per_option_mean)
        if (m > 0.0) e_min = e_min == 0.0 ? m : std::min(e_min, m);
    const Real bound = renewal_bound(stats.tau_min, stats.tau_max, e_min, 30, 0.1);

    RunConfig config{2000, 0.1, 17, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, options, config);
    const CoverageReport coverage = empirical_d_vs_bound(log, bound, 0.1);
    return {coverage.pass, fmt("bound %.2f for tau in [%g, %g]", bound, stats.tau_min,
                               stats.tau_max) +
                               fmt(", covered %.3f of 2000 episodes", coverage.fraction)};
}

struct FourRoomsRuns {
    std::vector<RunLog> smdp;  // seeds 1..20
    std::vector<RunLog> flat;  // seeds 1..20
    double smdp10_seconds = 0.0;
};

FourRoomsRuns runs_cache;

void compute_four_rooms_runs() {
    const Environment env = make_four_rooms_env(5, 30, 0.0);
    runs_cache.smdp.resize(20);
    runs_cache.flat.resize(20);
    const auto t0 = Clock::now();
    parallel_for(10, 2, [&](int i) {
        RunConfig config{5000, 0.1, static_cast<std::uint64_t>(i + 1), -1};
        runs_cache.smdp[i] = run_fh_smdp_ucrl(env.mdp, env.options, config);
    });
    runs_cache.smdp10_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    parallel_for(10, 2, [&](int i) {
        RunConfig config{5000, 0.1, static_cast<std::uint64_t>(i + 11), -1};
        runs_cache.smdp[i + 10] = run_fh_smdp_ucrl(env.mdp, env.options, config);
    });
    parallel_for(20, 2, [&](int i) {
        RunConfig config{5000, 0.1, static_cast<std::uint64_t>(i + 1), -1};
        runs_cache.flat[i] = run_flat_ucrl(env.mdp, config);
    });
}

Outcome criterion_sublinear() {
    const int K = 5000, dec = K / 10;
    Real first = 0.0, last = 0.0;
    std::vector<Real> mean_cum(K, 0.0);
    for (int i = 0; i < 10; ++i) {
        for (int k = 0; k < K; ++k)
            mean_cum[k] += runs_cache.smdp[i].episodes[k].regret_cum / 10.0;
        for (int k = 0; k < dec; ++k) first += runs_cache.smdp[i].episodes[k].regret_inc;
        for (int k = K - dec; k < K; ++k) last += runs_cache.smdp[i].episodes[k].regret_inc;
    }
    first /= 10.0 * dec;
    last /= 10.0 * dec;
    // power-law fit on the mean curve past the early transient
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = K / 10; k < K; ++k) {
        const Real x = std::log(static_cast<Real>(k + 1));
        const Real y = std::log(std::max(mean_cum[k], 1e-9));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const Real p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const bool zero_bias = std::abs(runs_cache.smdp[0].bias) <= 1e-9;
    const bool pass =
        last <= first / 3.0 && p < 0.85 && zero_bias && runs_cache.smdp10_seconds <= 300.0;
    return {pass, fmt("decile means %.2f -> %.2f, fit exponent %.3f", first, last, p) +
                      fmt(", 10 seeds in %.0fs", runs_cache.smdp10_seconds)};
}

Outcome criterion_hierarchy_helps() {
    int wins = 0;
    Real smdp_sum = 0.0, flat_sum = 0.0;
    for (int i = 0; i < 20; ++i) {
        smdp_sum += runs_cache.smdp[i].final_regret();
        flat_sum += runs_cache.flat[i].final_regret();
        if (runs_cache.smdp[i].final_regret() < runs_cache.flat[i].final_regret()) ++wins;
    }
    return {wins >= 16, fmt("hierarchical below flat in %g of 20 paired seeds "
                            "(means %.0f vs %.0f)",
                            Real(wins), smdp_sum / 20.0, flat_sum / 20.0)};
}

Outcome criterion_calculators() {
    std::vector<std::string> problems;
    if (allocate_option_budget(1000, 4, 5, 4, 2) != 464) problems.push_back("budget");
    auto close = [](Real x, Real ref) { return std::abs(x - ref) <= 5e-4 * std::abs(ref); };
    if (!close(renewal_bound(1, 4, 2, 20, 0.1), 36.8137)) problems.push_back("renewal");
    if (!close(crossover_episodes(10, 20, 4, 0.5, 4), 6.5536e8)) problems.push_back("crossover");
    if (!close(theorem1_bound(20, 4, 1e4, 6, 5, 30), 7.46833e5)) problems.push_back("shape-1");
    if (!close(corollary1_bound(20, 4, 1e4, 5, 30), 7.46833e5))
        problems.push_back("fixed-length shape");
    if (!close(theorem2_bound(1e4, 5, 10, 4, 4, 30, 40), 1.51937e6))
        problems.push_back("two-phase shape");
    if (std::abs(bound_ratio(6.5536e8, 10, 20, 4, 0.5, 4) - 1.0) > 1e-9)
        problems.push_back("ratio-at-crossover");
    if (problems.empty())
        return {true, "all worked examples reproduced to 4 significant figures"};
    std::string detail = "failed:";
    for (const auto& p : problems) detail += " " + p;
    return {false, detail};
}

Outcome criterion_ci_coverage() {
    Rng rng(1011);
    const Real delta_prime = 0.05;
    const int trials = 10000;
    int covered_r = 0;
    for (int t = 0; t < trials; ++t) {
        SufficientStats stats(1, 1, 5);
        for (int i = 0; i < 40; ++i)
            stats.record(0, 0, 1, 0, rng.uniform() < 0.3 ? 1.0 : 0.0);
        if (std::abs(stats.reward_mean(0, 0, 1) - 0.3) <=
            reward_bonus(stats, 0, 0, 1, delta_prime))
            ++covered_r;
    }
    Vec p(4);
    p << 0.4, 0.3, 0.2, 0.1;
    int covered_p = 0;
    for (int t = 0; t < trials; ++t) {
        SufficientStats stats(4, 1, 3);
        Vec counts = Vec::Zero(4);
        const int n = 60;
        for (int i = 0; i < n; ++i) {
            const int idx = rng.categorical(p);
            stats.record(0, 0, 1, idx, 0.0);
            counts(idx) += 1.0;
        }
        Real l1 = 0.0;
        for (int i = 0; i < 4; ++i) l1 += std::abs(counts(i) / n - p(i));
        if (l1 <= transition_bonus(stats, 0, 0, 1, delta_prime, 4)) ++covered_p;
    }
    const Real slack = 3.0 * std::sqrt(delta_prime * (1 - delta_prime) / trials);
    const Real fr = static_cast<Real>(covered_r) / trials;
    const Real fp = static_cast<Real>(covered_p) / trials;
    const bool pass = fr >= 1.0 - delta_prime - slack && fp >= 1.0 - delta_prime - slack;
    return {pass, fmt("reward coverage %.4f, transition coverage %.4f (target %.4f)", fr, fp,
                      1.0 - delta_prime - slack)};
}

Outcome criterion_determinism() {
    const std::string base = "acceptance_determinism";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string config_text = R"({
      "out_dir": "OUT",
      "seeds": [5, 6],
      "runs": [
        {"name": "chain", "agent": "smdp-ucrl", "episodes": 40, "delta": 0.1,
         "env": {"preset": "chain", "length": 6, "horizon": 10, "noise": 0.2, "max_advance": 3}},
        {"name": "flat", "agent": "flat-ucrl", "episodes": 40, "delta": 0.1,
         "env": {"preset": "chain", "length": 6, "horizon": 10, "noise": 0.2}}
      ]
    })";
    auto write_cfg = [&](const std::string& name, const std::string& out) {
        std::string text = config_text;
        text.replace(text.find("OUT"), 3, out);
        const std::string path = base + "/" + name;
        std::ofstream file(path);
        file << text;
        return path;
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    RunnerOverrides overrides;
    if (run_experiment(write_cfg("c1.json", base + "/a"), overrides) != 0)
        return {false, "first batch failed"};
    if (run_experiment(write_cfg("c2.json", base + "/b"), overrides) != 0)
        return {false, "second batch failed"};
    for (const std::string file :
         {"chain_seed5.csv", "chain_seed6.csv", "flat_seed5.csv", "flat_seed6.csv",
          "summary.csv"}) {
        if (slurp(base + "/a/" + file) != slurp(base + "/b/" + file))
            return {false, "byte mismatch in " + file};
    }
    fs::remove_all(base);
    return {true, "repeated batches byte-identical across 4 run files and the summary"};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "exact planning matches policy enumeration", 10, criterion_exact_planning);
    run_criterion(2, "performance-difference identity", 30, criterion_pdl);
    run_criterion(3, "optimistic values dominate the optimum", 60, criterion_optimism);
    run_criterion(4, "ball maximizer matches the LP oracle", 10, criterion_l1_oracle);
    run_criterion(5, "single-step options reduce to the flat learner", 120,
                  criterion_flat_reduction);
    run_criterion(6, "fixed-length options pin the decision count", 60, criterion_fixed_length);
    run_criterion(7, "decision-count bound holds empirically", 60, criterion_renewal);

    const auto t0 = Clock::now();
    compute_four_rooms_runs();
    std::printf("     (four-room batch: 40 runs in %.0fs)\n",
                std::chrono::duration<double>(Clock::now() - t0).count());
    run_criterion(8, "room-world regret is sublinear", 600, criterion_sublinear);
    run_criterion(9, "temporal abstraction beats the flat learner", 600,
                  criterion_hierarchy_helps);

    run_criterion(10, "bound calculators reproduce worked examples", 1, criterion_calculators);
    run_criterion(11, "confidence intervals reach their coverage", 60, criterion_ci_coverage);
    run_criterion(12, "experiment batches are byte-deterministic", 120, criterion_determinism);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
