#pragma once

#include "smdplab/types.hpp"

#include <vector>

namespace smdplab {

/// Finite-horizon semi-MDP. Each (s, o, h) cell owns a joint distribution
/// over (next state, landing stage) outcomes with landing stage h' > h,
/// stored sparsely with JointOutcomeLayout indices, plus the expected
/// cumulative reward collected until the action returns control.
///
/// Cells may be marked non-admissible (the action cannot start there); such
/// cells carry a placeholder row and are skipped by planners.
class FhSmdp {
public:
    FhSmdp() = default;
    FhSmdp(int num_states, int num_options, int horizon);

    int num_states() const { return num_states_; }
    int num_options() const { return num_options_; }
    int horizon() const { return horizon_; }
    int start_state() const { return start_state_; }
    void set_start_state(int s) { start_state_ = s; }

    JointOutcomeLayout layout() const { return {num_states_, horizon_}; }

    const SparseRow& kernel(int s, int o, int h) const { return kernel_[cell(s, o, h)]; }
    void set_kernel(int s, int o, int h, SparseRow row) { kernel_[cell(s, o, h)] = std::move(row); }

    Real reward(int s, int o, int h) const { return reward_[cell(s, o, h)]; }
    void set_reward(int s, int o, int h, Real r) { reward_[cell(s, o, h)] = r; }

    bool admissible(int s, int o, int h) const { return admissible_[cell(s, o, h)] != 0; }
    void set_admissible(int s, int o, int h, bool v) { admissible_[cell(s, o, h)] = v ? 1 : 0; }

    /// Flat index of a decision cell, h in [1, H-1].
    int cell(int s, int o, int h) const {
        return ((h - 1) * num_options_ + o) * num_states_ + s;
    }
    int num_cells() const { return num_states_ * num_options_ * (horizon_ - 1); }

private:
    int num_states_ = 0;
    int num_options_ = 0;
    int horizon_ = 0;
    int start_state_ = 0;
    std::vector<SparseRow> kernel_;
    std::vector<Real> reward_;
    std::vector<std::uint8_t> admissible_;
};

ValidationReport validate_smdp(const FhSmdp& smdp);

/// Exact value of a deterministic policy by backward recursion;
/// values(s, H) = 0. Throws if the policy is undefined at a cell reachable
/// as a decision epoch from stage 1.
StageValueTable policy_value(const FhSmdp& smdp, const HighLevelPolicy& policy);

}  // namespace smdplab
