#pragma once

#include "smdplab/envs.hpp"
#include "smdplab/planning.hpp"
#include "smdplab/simulate.hpp"
#include "smdplab/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace smdplab {

struct RunConfig {
    int episodes = 0;       // logged learning episodes K
    Real delta = 0.1;       // global failure probability
    std::uint64_t seed = 0;
    int support_size = -1;  // L1 radius support term; -1 = state count
};

struct EpisodeRecord {
    int episode = 0;  // 1-based
    int phase = 0;    // 0 = single-phase agent, 1/2 = two-phase stages
    int decisions = 0;
    Real ret = 0.0;       // reward collected in the episode
    Real v_opt = 0.0;     // planner's optimistic value at the start
    Real v_policy = 0.0;  // true value of the executed policy
    Real regret_inc = 0.0;
    Real regret_cum = 0.0;
};

struct RunLog {
    Real v_star = 0.0;  // oracle value the regret is measured against
    Real bias = 0.0;    // flat optimum minus option-model optimum, when known
    std::vector<EpisodeRecord> episodes;
    std::vector<EpisodeTrace> traces;   // parallel to `episodes`
    HighLevelPolicy last_policy;        // policy played in the final episode
    SufficientStats final_stats;        // statistics after the final episode

    Real final_regret() const {
        return episodes.empty() ? 0.0 : episodes.back().regret_cum;
    }
};

/// Seeded uniform draw over the initiable options per (s, h); used for the
/// unlogged warm-up episode that seeds the statistics.
HighLevelPolicy random_admissible_policy(const OptionSet& options, int num_states, int horizon,
                                         Rng& rng);

/// Optimistic episodic learner over a fixed option set: per episode, build
/// the empirical model and confidence radii, plan optimistically, execute
/// the greedy policy option-by-option, and log regret against the exact
/// optimum of the induced semi-MDP.
RunLog run_fh_smdp_ucrl(const FhMdp& mdp, const OptionSet& options, const RunConfig& config);

/// Flat baseline: the same loop over primitive actions with single-stage
/// estimators and the flat optimistic planner.
RunLog run_flat_ucrl(const FhMdp& mdp, const RunConfig& config);

/// Sub-problem description for learning one option's internal policy: a
/// state/action restriction of the base model with its own (shorter)
/// horizon and a goal-reaching reward at `target_state`. Transition mass
/// leaving `states` is absorbed in a zero-reward sink.
struct OptionScaffold {
    std::string id;
    std::vector<int> states;   // base-model state ids, sorted
    std::vector<int> actions;  // base-model action ids, sorted
    int horizon = 0;           // H_o <= H
    int start_state = 0;       // base-model id, member of `states`
    int target_state = 0;      // base-model id, member of `states`
    bool loiter_at_target = false;  // frozen option stays initiable at the target
};

/// The sub-model the scaffold induces (last state is the absorbing sink).
FhMdp build_sub_mdp(const FhMdp& mdp, const OptionScaffold& scaffold);

struct LearnedOption {
    IntMat internal_policy;  // base-model S x H; -1 outside the scaffold
    RunLog log;              // the sub-problem learning run
};

/// Run the flat optimistic learner on the scaffold's sub-problem for
/// `episodes` episodes and freeze the greedy policy played in the final
/// episode (its plenty-of-runway slice at local stage 1) over the scaffold
/// states.
LearnedOption learn_option_policy(const FhMdp& mdp, const OptionScaffold& scaffold,
                                  int episodes, std::uint64_t seed, Real delta = 0.1);

/// Episodes allocated to each option's learning phase,
/// floor((K^2 S_o^2 H_o^2 A_o / (4 O^2))^(1/3)), at least 1 and capped so
/// all option phases fit strictly inside K.
int allocate_option_budget(int K, int S_o, int H_o, int A_o, int O);

/// Learn every option policy on its scaffold, freeze the learned options,
/// then run the optimistic SMDP learner for the remaining episodes. Phase-1
/// episodes are charged the full oracle value as regret.
RunLog run_two_phase(const FhMdp& mdp, const std::vector<OptionScaffold>& scaffolds,
                     const RunConfig& config, const std::vector<int>& budget_override = {});

/// Freeze a learned internal policy into an executable option.
OptionSpec make_option_from_scaffold(const OptionScaffold& scaffold,
                                     const IntMat& internal_policy, int horizon);

/// Per-cell initiation mask in planner layout.
std::vector<std::uint8_t> admissibility_mask(const OptionSet& options, int num_states,
                                             int horizon);

}  // namespace smdplab
