#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include "smdplab/agents.hpp"
#include "smdplab/analysis.hpp"

#include <cmath>

using namespace smdplab;

namespace {

bool logs_equal(const RunLog& a, const RunLog& b) {
    if (a.episodes.size() != b.episodes.size()) return false;
    for (std::size_t i = 0; i < a.episodes.size(); ++i) {
        const auto& x = a.episodes[i];
        const auto& y = b.episodes[i];
        if (x.decisions != y.decisions || x.ret != y.ret || x.v_opt != y.v_opt ||
            x.v_policy != y.v_policy || x.regret_inc != y.regret_inc ||
            x.regret_cum != y.regret_cum)
            return false;
    }
    return true;
}

/// Chain scaffolds with state-triggered termination: two forward segments
/// plus a decoy whose target is unreachable, so the decision at the upper
/// cells carries a real value gap.
std::vector<OptionScaffold> segment_scaffolds(int sub_horizon) {
    OptionScaffold a;
    a.id = "seg-a";
    a.states = {0, 1, 2, 3};
    a.actions = {0, 1};
    a.horizon = sub_horizon;
    a.start_state = 0;
    a.target_state = 3;
    OptionScaffold b;
    b.id = "seg-b";
    b.states = {3, 4, 5};
    b.actions = {0, 1};
    b.horizon = sub_horizon;
    b.start_state = 3;
    b.target_state = 5;
    b.loiter_at_target = true;
    OptionScaffold c;  // the chain cannot move left, so this one only idles
    c.id = "seg-decoy";
    c.states = {3, 4, 5};
    c.actions = {0, 1};
    c.horizon = sub_horizon;
    c.start_state = 4;
    c.target_state = 3;
    return {a, b, c};
}

OptionSet hand_coded_segments(const FhMdp& mdp, int sub_horizon) {
    OptionSet set;
    const auto scaffolds = segment_scaffolds(sub_horizon);
    for (std::size_t i = 0; i < scaffolds.size(); ++i) {
        IntMat policy = IntMat::Constant(mdp.num_states(), mdp.horizon(), -1);
        const int action = scaffolds[i].id == "seg-decoy" ? 0 : 1;  // idle vs advance
        for (const int s : scaffolds[i].states)
            for (int h = 0; h < mdp.horizon(); ++h) policy(s, h) = action;
        set.options.push_back(make_option_from_scaffold(scaffolds[i], policy, mdp.horizon()));
    }
    return set;
}

}  // namespace

TEST_CASE("a single-episode run logs exactly one entry") {
    const Environment env = make_chain_env(5, 8, 0.2);
    RunConfig config{1, 0.1, 7, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, env.options, config);
    CHECK(log.episodes.size() == 1);
    CHECK(log.episodes[0].episode == 1);
}

TEST_CASE("fixed-length macros take exactly H over tau decisions every episode") {
    Environment env = make_chain_env(6, 30, 0.3, 5);
    OptionSet only5;
    only5.options.push_back(env.options[4]);  // the length-5 grid macro
    RunConfig config{40, 0.1, 3, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, only5, config);
    for (const auto& rec : log.episodes) CHECK(rec.decisions == 6);
}

TEST_CASE("runs are reproducible bit-for-bit under a fixed seed") {
    const Environment env = make_chain_env(5, 10, 0.25, 2);
    RunConfig config{25, 0.1, 99, -1};
    const RunLog a = run_fh_smdp_ucrl(env.mdp, env.options, config);
    const RunLog b = run_fh_smdp_ucrl(env.mdp, env.options, config);
    CHECK(logs_equal(a, b));
    const RunLog fa = run_flat_ucrl(env.mdp, config);
    const RunLog fb = run_flat_ucrl(env.mdp, config);
    CHECK(logs_equal(fa, fb));
}

TEST_CASE("a single-action model accrues no regret") {
    FhMdp mdp(3, 1, 6);
    for (int s = 0; s < 3; ++s) {
        Vec row = Vec::Zero(3);
        row(std::min(s + 1, 2)) = 1.0;
        mdp.set_transition_row_all_stages(s, 0, row);
        mdp.set_reward_all_stages(s, 0, 0.5, RewardKind::Bernoulli);
    }
    RunConfig config{15, 0.1, 4, -1};
    const RunLog log = run_flat_ucrl(mdp, config);
    for (const auto& rec : log.episodes) CHECK(std::abs(rec.regret_inc) <= 1e-12);
}

TEST_CASE("single-step options and the flat learner take identical trajectories") {
    // every stage keeps a state the dynamics cannot reach, which pins the
    // optimistic continuation target of both planners to the same outcome
    const int H = 8;
    const Environment env = make_chain_env(H, H, 0.25);
    const OptionSet primitive = make_primitive_options(env.mdp);
    RunConfig config{40, 0.1, 11, -1};
    const RunLog hier = run_fh_smdp_ucrl(env.mdp, primitive, config);
    const RunLog flat = run_flat_ucrl(env.mdp, config);
    REQUIRE(hier.episodes.size() == flat.episodes.size());
    for (std::size_t k = 0; k < hier.episodes.size(); ++k) {
        const auto& a = hier.traces[k];
        const auto& b = flat.traces[k];
        REQUIRE(a.decisions.size() == b.decisions.size());
        for (std::size_t i = 0; i < a.decisions.size(); ++i) {
            CHECK(a.decisions[i].o == b.decisions[i].o);
            CHECK(a.decisions[i].s == b.decisions[i].s);
            CHECK(a.decisions[i].s_next == b.decisions[i].s_next);
            CHECK(a.decisions[i].reward == b.decisions[i].reward);
        }
        CHECK(hier.episodes[k].regret_inc == flat.episodes[k].regret_inc);
        CHECK(hier.episodes[k].v_opt == flat.episodes[k].v_opt);
    }
}

TEST_CASE("optimistic start values dominate the optimum at the configured rate") {
    const Environment env = make_chain_env(5, 9, 0.2);
    const OptionSet primitive = make_primitive_options(env.mdp);
    RunConfig config{60, 0.1, 21, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, primitive, config);
    long dominated = 0;
    for (const auto& rec : log.episodes)
        if (rec.v_opt >= log.v_star - 1e-9) ++dominated;
    CHECK(static_cast<Real>(dominated) / log.episodes.size() >= 0.9);
}

TEST_CASE("decision counts respect the shortest-duration ceiling") {
    const Environment env = make_chain_env(6, 21, 0.3, 4);
    OptionSet grid;
    grid.options.push_back(env.options[1]);  // lengths 2 and 4 only
    grid.options.push_back(env.options[3]);
    RunConfig config{30, 0.1, 6, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, grid, config);
    for (const auto& rec : log.episodes)
        CHECK(rec.decisions <= (21 + 1) / 2);
}

TEST_CASE("sub-problem learning recovers the optimal policy of a small region") {
    const Environment env = make_chain_env(6, 12, 0.0);
    OptionScaffold sc = segment_scaffolds(8)[0];
    const LearnedOption learned = learn_option_policy(env.mdp, sc, 500, 5);
    // the region's optimum advances toward the target from every interior cell
    for (const int s : {0, 1, 2})
        CHECK(learned.internal_policy(s, 0) == 1);
    CHECK(learned.log.episodes.size() == 500);
}

TEST_CASE("one learning episode still yields a well-defined policy") {
    const Environment env = make_chain_env(6, 12, 0.1);
    OptionScaffold sc = segment_scaffolds(6)[0];
    const LearnedOption learned = learn_option_policy(env.mdp, sc, 1, 8);
    for (const int s : sc.states) CHECK(learned.internal_policy(s, 0) >= 0);
}

TEST_CASE("scaffolds referencing unknown states or actions are rejected") {
    const Environment env = make_chain_env(4, 8, 0.0);
    OptionScaffold sc;
    sc.id = "broken";
    sc.states = {0, 9};
    sc.actions = {0, 1};
    sc.horizon = 4;
    sc.start_state = 0;
    sc.target_state = 0;
    CHECK_THROWS(learn_option_policy(env.mdp, sc, 5, 1));
    sc.states = {0, 1};
    sc.actions = {0, 7};
    CHECK_THROWS(learn_option_policy(env.mdp, sc, 5, 1));
}

TEST_CASE("goal-directed sub-rewards reproduce the full optimum on the region") {
    // On the chain, the full-model optimum advances everywhere; the segment
    // sub-problem teaches the same choice on every non-terminal region cell.
    const Environment env = make_chain_env(6, 12, 0.0);
    const auto full = flat_backward_induction(env.mdp);
    OptionScaffold sc = segment_scaffolds(8)[0];
    const LearnedOption learned = learn_option_policy(env.mdp, sc, 400, 12);
    for (const int s : sc.states) {
        if (s == sc.target_state) continue;
        CHECK(learned.internal_policy(s, 0) == full.policy.at(s, 1));
    }
}

TEST_CASE("the closed-form learning budget evaluates and caps correctly") {
    CHECK(allocate_option_budget(1000, 4, 5, 4, 2) == 464);
    // doubling the option count shrinks the budget by 2^(2/3)
    const Real single = allocate_option_budget(100000, 4, 5, 4, 2);
    const Real doubled = allocate_option_budget(100000, 4, 5, 4, 4);
    CHECK(doubled / single == doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(0.01));
    // the cap keeps all phases strictly inside K
    const int k = allocate_option_budget(40, 50, 50, 10, 3);
    CHECK(3 * k < 40);
    CHECK(k == 13);
    CHECK_THROWS(allocate_option_budget(3, 4, 5, 4, 3));
}

TEST_CASE("two-phase accounting fills the whole episode budget") {
    const Environment env = make_chain_env(6, 10, 0.0);
    const auto scaffolds = segment_scaffolds(6);
    RunConfig config{61, 0.1, 31, -1};
    const RunLog log = run_two_phase(env.mdp, scaffolds, config, {20, 20, 20});
    REQUIRE(static_cast<int>(log.episodes.size()) == 61);
    int phase2 = 0;
    for (const auto& rec : log.episodes)
        if (rec.phase == 2) ++phase2;
    CHECK(phase2 == 1);  // K = sum of budgets + 1
    // phase-1 episodes charge the full oracle value
    for (const auto& rec : log.episodes)
        if (rec.phase == 1) CHECK(rec.regret_inc == doctest::Approx(log.v_star));
    // cumulative regret is non-decreasing
    for (std::size_t i = 1; i < log.episodes.size(); ++i)
        CHECK(log.episodes[i].regret_cum >= log.episodes[i - 1].regret_cum - 1e-9);
}

TEST_CASE("learned options reproduce hand-coded behavior and its regret law") {
    const Environment env = make_chain_env(6, 10, 0.0);
    const OptionSet hand = hand_coded_segments(env.mdp, 6);
    REQUIRE(validate_option_set(hand, env.mdp).ok());
    const auto scaffolds = segment_scaffolds(6);

    const int k2 = 60;
    std::vector<Real> two_phase_tail, hand_tail;
    for (int seed = 0; seed < 20; ++seed) {
        RunConfig tp{180 + k2, 0.1, static_cast<std::uint64_t>(1000 + seed), -1};
        const RunLog tp_log = run_two_phase(env.mdp, scaffolds, tp, {60, 60, 60});
        Real phase1_total = 0.0;
        for (const auto& rec : tp_log.episodes)
            if (rec.phase == 1) phase1_total = rec.regret_cum;
        two_phase_tail.push_back(tp_log.final_regret() - phase1_total);

        RunConfig plain{k2, 0.1, static_cast<std::uint64_t>(5000 + seed), -1};
        const RunLog hand_log = run_fh_smdp_ucrl(env.mdp, hand, plain);
        hand_tail.push_back(hand_log.final_regret());
        CHECK(std::abs(hand_log.v_star - tp_log.v_star) <= 1e-9);
    }
    CHECK(oracles::ks_two_sample_p(two_phase_tail, hand_tail) > 0.01);
}

TEST_CASE("episode traces satisfy the chaining invariant in agent runs") {
    const Environment env = make_chain_env(5, 12, 0.2, 3);
    RunConfig config{10, 0.1, 13, -1};
    const RunLog log = run_fh_smdp_ucrl(env.mdp, env.options, config);
    for (const auto& trace : log.traces) {
        REQUIRE_FALSE(trace.decisions.empty());
        CHECK(trace.decisions.back().h_next == 12);
        for (std::size_t i = 1; i < trace.decisions.size(); ++i) {
            CHECK(trace.decisions[i].h == trace.decisions[i - 1].h_next);
            CHECK(trace.decisions[i].s == trace.decisions[i - 1].s_next);
        }
    }
}
