#pragma once

#include "smdplab/types.hpp"

#include <vector>

namespace smdplab {

enum class RewardKind : std::uint8_t { Deterministic = 0, Bernoulli = 1 };

/// Finite-horizon MDP with stage-dependent transitions and bounded mean
/// rewards in [0, 1]. Stages are 1-based, h in [1, H]; actions are taken at
/// stages 1..H-1 and the episode ends on reaching stage H.
class FhMdp {
public:
    FhMdp() = default;
    FhMdp(int num_states, int num_actions, int horizon);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int horizon() const { return horizon_; }

    int start_state() const { return start_state_; }
    void set_start_state(int s) { start_state_ = s; }

    /// Row of transition probabilities over next states for (s, a, h), h < H.
    const Mat& transition_matrix(int a, int h) const { return transition_[slot(a, h)]; }
    Mat& transition_matrix(int a, int h) { return transition_[slot(a, h)]; }
    Real transition(int s, int a, int h, int s_next) const {
        return transition_[slot(a, h)](s, s_next);
    }
    void set_transition_row(int s, int a, int h, const Vec& row) {
        transition_[slot(a, h)].row(s) = row.transpose();
    }

    Real reward_mean(int s, int a, int h) const { return reward_mean_[slot(a, h)](s); }
    RewardKind reward_kind(int s, int a, int h) const {
        return static_cast<RewardKind>(reward_kind_[slot(a, h)][s]);
    }
    void set_reward(int s, int a, int h, Real mean, RewardKind kind) {
        reward_mean_[slot(a, h)](s) = mean;
        reward_kind_[slot(a, h)][s] = static_cast<std::uint8_t>(kind);
    }

    /// Convenience for stage-homogeneous models: same row/reward at every h < H.
    void set_transition_row_all_stages(int s, int a, const Vec& row);
    void set_reward_all_stages(int s, int a, Real mean, RewardKind kind);

private:
    int slot(int a, int h) const { return (h - 1) * num_actions_ + a; }

    int num_states_ = 0;
    int num_actions_ = 0;
    int horizon_ = 0;
    int start_state_ = 0;
    std::vector<Mat> transition_;                       // per (a, h): S x S
    std::vector<Vec> reward_mean_;                      // per (a, h): S
    std::vector<std::vector<std::uint8_t>> reward_kind_;
};

/// Reports every violated model invariant; an empty report means valid.
ValidationReport validate_mdp(const FhMdp& model);

}  // namespace smdplab
