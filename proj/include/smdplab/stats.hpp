#pragma once

#include "smdplab/types.hpp"

#include <iosfwd>
#include <vector>

namespace smdplab {

/// Streaming sufficient statistics per decision cell (s, choice, h):
/// visit count, joint outcome counts, and reward mean/M2 accumulated with a
/// one-pass rule. The outcome index space is caller-defined: agents over
/// temporally extended actions use JointOutcomeLayout indices, flat agents
/// use the next state directly. Single writer; reads of a snapshot are safe.
class SufficientStats {
public:
    SufficientStats() = default;
    SufficientStats(int num_states, int num_choices, int horizon);

    int num_states() const { return num_states_; }
    int num_choices() const { return num_choices_; }
    int horizon() const { return horizon_; }

    /// Record one decision outcome. `omega` is the outcome index; callers
    /// encoding (s', h') pairs must have checked h' > h.
    void record(int s, int c, int h, int omega, Real reward);

    long count(int s, int c, int h) const { return n_[cell(s, c, h)]; }
    Real reward_mean(int s, int c, int h) const {
        const int i = cell(s, c, h);
        return n_[i] > 0 ? reward_sum_[i] / static_cast<Real>(n_[i]) : 0.0;
    }
    /// Unbiased sample variance (n-1 denominator); 0 for fewer than 2 samples.
    Real reward_variance(int s, int c, int h) const {
        const int i = cell(s, c, h);
        return n_[i] > 1 ? reward_m2_[i] / static_cast<Real>(n_[i] - 1) : 0.0;
    }
    Real reward_m2(int s, int c, int h) const { return reward_m2_[cell(s, c, h)]; }

    /// Outcome counts, sorted by outcome index.
    const std::vector<std::pair<int, long>>& outcome_counts(int s, int c, int h) const {
        return counts_[cell(s, c, h)];
    }

    int cell(int s, int c, int h) const {
        return ((h - 1) * num_choices_ + c) * num_states_ + s;
    }
    int num_cells() const { return num_states_ * num_choices_ * (horizon_ - 1); }

    /// Versioned text snapshot for run resumption.
    void save(std::ostream& out) const;
    static SufficientStats load(std::istream& in);

private:
    int num_states_ = 0;
    int num_choices_ = 0;
    int horizon_ = 0;
    std::vector<long> n_;
    std::vector<Real> reward_sum_;
    std::vector<Real> reward_m2_;
    std::vector<std::vector<std::pair<int, long>>> counts_;
};

/// Record an SMDP decision sample (s, o, h, s', h', r); h' must exceed h.
void update(SufficientStats& stats, const JointOutcomeLayout& layout, int s, int o, int h,
            int s_next, int h_next, Real reward);

/// Empirical outcome distribution for one cell, dense over the outcome
/// space: counts / n when n >= 1, uniform when the cell has no data.
Vec empirical_row(const SufficientStats& stats, int s, int c, int h, int outcome_space);

/// Reward exploration bonus (empirical-Bernstein shape). With fewer than 2
/// samples falls back to the largest feasible cumulative reward H - h + 1.
Real reward_bonus(const SufficientStats& stats, int s, int c, int h, Real delta_prime);

/// L1 transition radius (Weissman shape), capped at the simplex diameter 2.
/// `support_size` defaults to the state count of the underlying model.
Real transition_bonus(const SufficientStats& stats, int s, int c, int h, Real delta_prime,
                      int support_size);

/// Union-bound split of the failure probability across all confidence sets.
Real split_confidence(Real delta, int S, int O, int H, int K);

/// Per-episode snapshot of the empirical model plus confidence radii, the
/// planner's sole input. `joint` tags the outcome index semantics.
struct ConfidenceModel {
    int num_states = 0;
    int num_choices = 0;
    int horizon = 0;
    bool joint = true;
    Real delta_prime = 0.0;
    std::vector<Real> r_hat;
    std::vector<Real> beta_r;
    std::vector<Real> beta_p;
    std::vector<long> n;
    std::vector<SparseRow> p_hat;          // empty row = no data (uniform default)
    std::vector<std::uint8_t> admissible;  // planner maximizes over these cells only

    int cell(int s, int c, int h) const {
        return ((h - 1) * num_choices + c) * num_states + s;
    }
};

/// Build the planner input from joint-outcome statistics. `admissible` may
/// be empty (all cells allowed) or hold one flag per cell.
ConfidenceModel build_confidence(const SufficientStats& stats, Real delta_prime,
                                 int support_size, std::vector<std::uint8_t> admissible = {},
                                 bool joint = true);

}  // namespace smdplab
