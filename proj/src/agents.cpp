#include "smdplab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace smdplab {

namespace {

EpisodeTrace run_option_episode(const FhMdp& mdp, const OptionSet& options,
                                const HighLevelPolicy& policy, Rng& rng) {
    EpisodeTrace trace;
    int s = mdp.start_state();
    int h = 1;
    while (h < mdp.horizon()) {
        const int o = policy.defined(s, h) ? policy.at(s, h) : -1;
        if (o < 0) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "no admissible option at reached (s=%d, h=%d)", s,
                          h);
            throw std::runtime_error(buf);
        }
        DecisionRecord rec = execute_option(mdp, options[o], s, h, rng, &trace);
        rec.o = o;
        trace.decisions.push_back(rec);
        s = rec.s_next;
        h = rec.h_next;
    }
    return trace;
}

EpisodeTrace run_primitive_episode(const FhMdp& mdp, const HighLevelPolicy& policy, Rng& rng) {
    EpisodeTrace trace;
    int s = mdp.start_state();
    for (int h = 1; h < mdp.horizon(); ++h) {
        const int a = policy.at(s, h);
        require(a >= 0, "flat episode: policy undefined at a reached state");
        auto [s_next, r] = step_primitive(mdp, s, a, h, rng);
        trace.primitive_steps.push_back({s, a, h, s_next, r});
        trace.decisions.push_back({s, a, h, s_next, h + 1, r, 1});
        s = s_next;
    }
    return trace;
}

void absorb_trace(SufficientStats& stats, const JointOutcomeLayout& layout,
                  const EpisodeTrace& trace) {
    for (const auto& d : trace.decisions)
        update(stats, layout, d.s, d.o, d.h, d.s_next, d.h_next, d.reward);
}

void absorb_trace_flat(SufficientStats& stats, const EpisodeTrace& trace) {
    for (const auto& d : trace.decisions) stats.record(d.s, d.o, d.h, d.s_next, d.reward);
}

void append_record(RunLog& log, int phase, const EpisodeTrace& trace, Real v_opt,
                   Real v_policy) {
    EpisodeRecord rec;
    rec.episode = static_cast<int>(log.episodes.size()) + 1;
    rec.phase = phase;
    rec.decisions = trace.decision_count();
    rec.ret = trace.total_reward();
    rec.v_opt = v_opt;
    rec.v_policy = v_policy;
    rec.regret_inc = log.v_star - v_policy;
    rec.regret_cum = rec.regret_inc + (log.episodes.empty() ? 0.0 : log.episodes.back().regret_cum);
    log.episodes.push_back(rec);
}

}  // namespace

HighLevelPolicy random_admissible_policy(const OptionSet& options, int num_states, int horizon,
                                         Rng& rng) {
    HighLevelPolicy policy(num_states, horizon);
    for (int s = 0; s < num_states; ++s) {
        for (int h = 1; h < horizon; ++h) {
            const auto initiable = options.initiable_at(s, h);
            if (initiable.empty()) continue;
            policy.set(s, h, initiable[rng.uniform_int(static_cast<int>(initiable.size()))]);
        }
    }
    return policy;
}

std::vector<std::uint8_t> admissibility_mask(const OptionSet& options, int num_states,
                                             int horizon) {
    const int O = options.size();
    std::vector<std::uint8_t> mask(
        static_cast<std::size_t>(num_states) * O * (horizon - 1), 0);
    for (int h = 1; h < horizon; ++h)
        for (int o = 0; o < O; ++o)
            for (int s = 0; s < num_states; ++s)
                mask[((h - 1) * O + o) * num_states + s] =
                    options[o].initiable(s, h) ? 1 : 0;
    return mask;
}

RunLog run_fh_smdp_ucrl(const FhMdp& mdp, const OptionSet& options, const RunConfig& config) {
    require(config.episodes >= 1, "run_fh_smdp_ucrl: need at least one episode");
    require(config.delta > 0.0 && config.delta < 1.0, "run_fh_smdp_ucrl: delta in (0,1)");
    {
        auto report = validate_mdp(mdp);
        require(report.ok(), "run_fh_smdp_ucrl: invalid model:\n" + report.joined());
        report = validate_option_set(options, mdp);
        require(report.ok(), "run_fh_smdp_ucrl: invalid option set:\n" + report.joined());
    }
    const int S = mdp.num_states();
    const int O = options.size();
    const int H = mdp.horizon();
    const int K = config.episodes;
    const JointOutcomeLayout layout{S, H};

    const FhSmdp truth = flatten_to_smdp(mdp, options);
    const ExactSolution oracle = exact_backward_induction(truth);

    RunLog log;
    log.v_star = oracle.v.at(truth.start_state(), 1);
    log.bias = flat_backward_induction(mdp).v.at(mdp.start_state(), 1) - log.v_star;

    SufficientStats stats(S, O, H);
    const Real delta_prime = split_confidence(config.delta, S, O, H, K);
    const int support = config.support_size > 0 ? config.support_size : S;
    auto mask = admissibility_mask(options, S, H);

    Rng rng(config.seed);
    const HighLevelPolicy mu0 = random_admissible_policy(options, S, H, rng);
    absorb_trace(stats, layout, run_option_episode(mdp, options, mu0, rng));

    for (int k = 1; k <= K; ++k) {
        const ConfidenceModel conf =
            build_confidence(stats, delta_prime, support, mask, /*joint=*/true);
        const OptimisticSolution sol = extended_value_iteration(conf, H);
        EpisodeTrace trace = run_option_episode(mdp, options, sol.policy, rng);
        const Real v_policy = policy_value(truth, sol.policy).at(truth.start_state(), 1);
        append_record(log, 0, trace, sol.v.at(truth.start_state(), 1), v_policy);
        absorb_trace(stats, layout, trace);
        log.traces.push_back(std::move(trace));
        if (k == K) log.last_policy = sol.policy;
    }
    log.final_stats = std::move(stats);
    return log;
}

RunLog run_flat_ucrl(const FhMdp& mdp, const RunConfig& config) {
    require(config.episodes >= 1, "run_flat_ucrl: need at least one episode");
    require(config.delta > 0.0 && config.delta < 1.0, "run_flat_ucrl: delta in (0,1)");
    {
        const auto report = validate_mdp(mdp);
        require(report.ok(), "run_flat_ucrl: invalid model:\n" + report.joined());
    }
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    const int H = mdp.horizon();
    const int K = config.episodes;

    const ExactSolution oracle = flat_backward_induction(mdp);
    RunLog log;
    log.v_star = oracle.v.at(mdp.start_state(), 1);
    log.bias = 0.0;

    SufficientStats stats(S, A, H);
    const Real delta_prime = split_confidence(config.delta, S, A, H, K);
    const int support = config.support_size > 0 ? config.support_size : S;

    Rng rng(config.seed);
    HighLevelPolicy pi0(S, H);
    for (int s = 0; s < S; ++s)
        for (int h = 1; h < H; ++h) pi0.set(s, h, rng.uniform_int(A));
    absorb_trace_flat(stats, run_primitive_episode(mdp, pi0, rng));

    for (int k = 1; k <= K; ++k) {
        const ConfidenceModel conf =
            build_confidence(stats, delta_prime, support, {}, /*joint=*/false);
        const OptimisticSolution sol = flat_evi(conf, H);
        EpisodeTrace trace = run_primitive_episode(mdp, sol.policy, rng);
        const Real v_policy = flat_policy_value(mdp, sol.policy).at(mdp.start_state(), 1);
        append_record(log, 0, trace, sol.v.at(mdp.start_state(), 1), v_policy);
        absorb_trace_flat(stats, trace);
        log.traces.push_back(std::move(trace));
        if (k == K) log.last_policy = sol.policy;
    }
    log.final_stats = std::move(stats);
    return log;
}

FhMdp build_sub_mdp(const FhMdp& mdp, const OptionScaffold& scaffold) {
    const int n = static_cast<int>(scaffold.states.size());
    const int a_n = static_cast<int>(scaffold.actions.size());
    require(n >= 1 && a_n >= 1, "scaffold: empty state or action set");
    require(scaffold.horizon >= 2 && scaffold.horizon <= mdp.horizon(),
            "scaffold: horizon must satisfy 2 <= H_o <= H");
    std::vector<int> to_sub(mdp.num_states(), -1);
    for (int i = 0; i < n; ++i) {
        require(scaffold.states[i] >= 0 && scaffold.states[i] < mdp.num_states(),
                "scaffold: state outside the base model");
        to_sub[scaffold.states[i]] = i;
    }
    for (const int a : scaffold.actions)
        require(a >= 0 && a < mdp.num_actions(), "scaffold: action outside the base model");
    require(to_sub[scaffold.start_state] >= 0, "scaffold: start state not in the region");
    require(to_sub[scaffold.target_state] >= 0, "scaffold: target state not in the region");

    const int sink = n;
    FhMdp sub(n + 1, a_n, scaffold.horizon);
    sub.set_start_state(to_sub[scaffold.start_state]);
    for (int h = 1; h < scaffold.horizon; ++h) {
        for (int ai = 0; ai < a_n; ++ai) {
            const int a = scaffold.actions[ai];
            for (int i = 0; i < n; ++i) {
                const int s = scaffold.states[i];
                Vec row = Vec::Zero(n + 1);
                for (int sp = 0; sp < mdp.num_states(); ++sp) {
                    const Real p = mdp.transition(s, a, h, sp);
                    if (p <= 0.0) continue;
                    if (to_sub[sp] >= 0)
                        row(to_sub[sp]) += p;
                    else
                        row(sink) += p;
                }
                sub.set_transition_row(i, ai, h, row);
                // goal-reaching reward: a bonus at the target, blended with
                // the base reward so actions at the target stay ranked
                const Real r_o =
                    s == scaffold.target_state
                        ? 0.5 * (1.0 + mdp.reward_mean(s, a, h))
                        : 0.0;
                sub.set_reward(i, ai, h, r_o, RewardKind::Deterministic);
            }
            Vec sink_row = Vec::Zero(n + 1);
            sink_row(sink) = 1.0;
            sub.set_transition_row(sink, ai, h, sink_row);
            sub.set_reward(sink, ai, h, 0.0, RewardKind::Deterministic);
        }
    }
    return sub;
}

LearnedOption learn_option_policy(const FhMdp& mdp, const OptionScaffold& scaffold,
                                  int episodes, std::uint64_t seed, Real delta) {
    require(episodes >= 1, "learn_option_policy: need at least one episode");
    const FhMdp sub = build_sub_mdp(mdp, scaffold);

    RunConfig sub_config;
    sub_config.episodes = episodes;
    sub_config.delta = delta;
    sub_config.seed = seed;
    RunLog sub_log = run_flat_ucrl(sub, sub_config);

    // Freeze a stationary greedy policy from the pooled empirical model.
    // The learner's trajectories visit each region state only at some
    // stages, so stage slices are unevenly informed; pooling the counts
    // across stages uses every sample (the region dynamics carry no stage
    // dependence) and the certainty-equivalent plan converges to the
    // region optimum.
    const int n_sub = sub.num_states();
    const int a_sub = sub.num_actions();
    const int H_o = sub.horizon();
    Mat pooled_reward = Mat::Zero(n_sub, a_sub);
    std::vector<Mat> pooled_p(a_sub, Mat::Zero(n_sub, n_sub));
    Mat pooled_n = Mat::Zero(n_sub, a_sub);
    for (int h = 1; h < H_o; ++h)
        for (int a = 0; a < a_sub; ++a)
            for (int s = 0; s < n_sub; ++s) {
                const long n = sub_log.final_stats.count(s, a, h);
                if (n == 0) continue;
                pooled_n(s, a) += static_cast<Real>(n);
                pooled_reward(s, a) +=
                    static_cast<Real>(n) * sub_log.final_stats.reward_mean(s, a, h);
                for (const auto& [sp, m] : sub_log.final_stats.outcome_counts(s, a, h))
                    pooled_p[a](s, sp) += static_cast<Real>(m);
            }
    FhMdp pooled(n_sub, a_sub, H_o);
    for (int a = 0; a < a_sub; ++a)
        for (int s = 0; s < n_sub; ++s) {
            Vec row = Vec::Zero(n_sub);
            if (pooled_n(s, a) > 0.0) {
                row = pooled_p[a].row(s).transpose() / pooled_n(s, a);
                pooled.set_reward_all_stages(
                    s, a, std::clamp(pooled_reward(s, a) / pooled_n(s, a), 0.0, 1.0),
                    RewardKind::Deterministic);
            } else {
                row(s) = 1.0;  // never tried: assume a no-op
            }
            pooled.set_transition_row_all_stages(s, a, row);
        }
    const ExactSolution plan = flat_backward_induction(pooled);

    LearnedOption out;
    out.internal_policy = IntMat::Constant(mdp.num_states(), mdp.horizon(), -1);
    for (int i = 0; i < static_cast<int>(scaffold.states.size()); ++i) {
        const int a = plan.policy.at(i, 1);  // plenty-of-runway slice
        if (a < 0) continue;
        for (int h = 1; h <= mdp.horizon(); ++h)
            out.internal_policy(scaffold.states[i], h - 1) = scaffold.actions[a];
    }
    out.log = std::move(sub_log);
    return out;
}

OptionSpec make_option_from_scaffold(const OptionScaffold& scaffold,
                                     const IntMat& internal_policy, int horizon) {
    const int S = static_cast<int>(internal_policy.rows());
    OptionSpec opt(scaffold.id, S, horizon);
    opt.internal_policy = internal_policy;
    std::vector<std::uint8_t> in_region(S, 0);
    for (const int s : scaffold.states) in_region[s] = 1;
    for (int h = 1; h <= horizon; ++h) {
        for (const int s : scaffold.states) {
            if (h < horizon && (s != scaffold.target_state || scaffold.loiter_at_target))
                opt.set_initiable(s, h);
        }
        // terminate at the target, at the horizon, and on leaving the
        // region (an imperfectly learned policy must stay executable)
        for (int s = 0; s < S; ++s)
            if (h == horizon || s == scaffold.target_state || !in_region[s])
                opt.set_beta(s, h, 1.0);
    }
    return opt;
}

int allocate_option_budget(int K, int S_o, int H_o, int A_o, int O) {
    require(K >= 1 && S_o >= 1 && H_o >= 1 && A_o >= 1 && O >= 1,
            "allocate_option_budget: all inputs must be positive");
    require(O < K, "allocate_option_budget: infeasible, O options cannot fit in K episodes");
    const Real k2 = static_cast<Real>(K) * static_cast<Real>(K);
    const Real raw = std::cbrt(k2 * S_o * S_o * H_o * H_o * A_o / (4.0 * O * O));
    int ko = std::max(1, static_cast<int>(std::floor(raw)));
    if (static_cast<long>(O) * ko >= K) ko = (K - 1) / O;
    require(ko >= 1, "allocate_option_budget: infeasible budget");
    return ko;
}

RunLog run_two_phase(const FhMdp& mdp, const std::vector<OptionScaffold>& scaffolds,
                     const RunConfig& config, const std::vector<int>& budget_override) {
    require(!scaffolds.empty(), "run_two_phase: need at least one scaffold");
    const int K = config.episodes;
    const int O = static_cast<int>(scaffolds.size());

    std::vector<int> budgets;
    if (!budget_override.empty()) {
        require(static_cast<int>(budget_override.size()) == O,
                "run_two_phase: budget override must match the scaffold count");
        budgets = budget_override;
    } else {
        int s_max = 1, h_max = 1, a_max = 1;
        for (const auto& sc : scaffolds) {
            s_max = std::max(s_max, static_cast<int>(sc.states.size()));
            h_max = std::max(h_max, sc.horizon);
            a_max = std::max(a_max, static_cast<int>(sc.actions.size()));
        }
        budgets.assign(O, allocate_option_budget(K, s_max, h_max, a_max, O));
    }
    long total_learning = 0;
    for (const int b : budgets) total_learning += b;
    require(total_learning < K, "run_two_phase: option budgets must leave learning episodes");

    Rng root(config.seed);
    std::vector<LearnedOption> learned;
    learned.reserve(O);
    OptionSet options;
    for (int i = 0; i < O; ++i) {
        learned.push_back(learn_option_policy(mdp, scaffolds[i], budgets[i],
                                              root.derive(1000 + i).seed(), config.delta));
        options.options.push_back(
            make_option_from_scaffold(scaffolds[i], learned[i].internal_policy, mdp.horizon()));
    }
    {
        const auto report = validate_option_set(options, mdp);
        require(report.ok(), "run_two_phase: learned option set invalid:\n" + report.joined());
    }

    const FhSmdp truth = flatten_to_smdp(mdp, options);
    const ExactSolution oracle = exact_backward_induction(truth);

    RunLog log;
    log.v_star = oracle.v.at(truth.start_state(), 1);
    log.bias = flat_backward_induction(mdp).v.at(mdp.start_state(), 1) - log.v_star;

    // Phase 1: each learning episode is charged the full oracle value.
    for (int i = 0; i < O; ++i) {
        for (std::size_t k = 0; k < learned[i].log.episodes.size(); ++k) {
            const auto& sub = learned[i].log.episodes[k];
            EpisodeRecord rec;
            rec.episode = static_cast<int>(log.episodes.size()) + 1;
            rec.phase = 1;
            rec.decisions = sub.decisions;
            rec.ret = sub.ret;
            rec.v_opt = sub.v_opt;
            rec.v_policy = 0.0;
            rec.regret_inc = log.v_star;
            rec.regret_cum =
                rec.regret_inc + (log.episodes.empty() ? 0.0 : log.episodes.back().regret_cum);
            log.episodes.push_back(rec);
            log.traces.push_back(learned[i].log.traces[k]);
        }
    }

    // Phase 2: optimistic SMDP learning with the frozen options.
    RunConfig phase2 = config;
    phase2.episodes = K - static_cast<int>(total_learning);
    phase2.seed = root.derive(2000).seed();
    RunLog inner = run_fh_smdp_ucrl(mdp, options, phase2);
    for (std::size_t k = 0; k < inner.episodes.size(); ++k) {
        const auto& e = inner.episodes[k];
        EpisodeRecord rec = e;
        rec.episode = static_cast<int>(log.episodes.size()) + 1;
        rec.phase = 2;
        rec.regret_cum =
            rec.regret_inc + (log.episodes.empty() ? 0.0 : log.episodes.back().regret_cum);
        log.episodes.push_back(rec);
        log.traces.push_back(inner.traces[k]);
    }
    log.last_policy = std::move(inner.last_policy);
    log.final_stats = std::move(inner.final_stats);
    return log;
}

}  // namespace smdplab
