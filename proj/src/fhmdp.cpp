#include "smdplab/fhmdp.hpp"

#include <cmath>
#include <cstdio>

namespace smdplab {

namespace {

std::string cell_name(int s, int a, int h) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "(s=%d, a=%d, h=%d)", s, a, h);
    return buf;
}

}  // namespace

FhMdp::FhMdp(int num_states, int num_actions, int horizon)
    : num_states_(num_states), num_actions_(num_actions), horizon_(horizon) {
    require(num_states >= 1 && num_actions >= 1 && horizon >= 2,
            "FhMdp requires S >= 1, A >= 1, H >= 2");
    const int slots = num_actions * (horizon - 1);
    transition_.assign(slots, Mat::Zero(num_states, num_states));
    reward_mean_.assign(slots, Vec::Zero(num_states));
    reward_kind_.assign(slots, std::vector<std::uint8_t>(num_states, 0));
}

void FhMdp::set_transition_row_all_stages(int s, int a, const Vec& row) {
    for (int h = 1; h < horizon_; ++h) set_transition_row(s, a, h, row);
}

void FhMdp::set_reward_all_stages(int s, int a, Real mean, RewardKind kind) {
    for (int h = 1; h < horizon_; ++h) set_reward(s, a, h, mean, kind);
}

ValidationReport validate_mdp(const FhMdp& model) {
    ValidationReport report;
    const int S = model.num_states();
    char buf[160];
    for (int h = 1; h < model.horizon(); ++h) {
        for (int a = 0; a < model.num_actions(); ++a) {
            const Mat& tr = model.transition_matrix(a, h);
            for (int s = 0; s < S; ++s) {
                Real sum = 0.0;
                bool negative = false;
                for (int sp = 0; sp < S; ++sp) {
                    const Real p = tr(s, sp);
                    if (p < 0.0) negative = true;
                    sum += p;
                }
                if (negative)
                    report.add("negative transition probability at " + cell_name(s, a, h));
                if (std::abs(sum - 1.0) > 1e-12) {
                    std::snprintf(buf, sizeof(buf),
                                  "transition row at %s sums to %.17g (deficit %.6g)",
                                  cell_name(s, a, h).c_str(), sum, 1.0 - sum);
                    report.add(buf);
                }
                const Real r = model.reward_mean(s, a, h);
                if (r < 0.0 || r > 1.0) {
                    std::snprintf(buf, sizeof(buf), "reward out of [0,1] at %s: %.17g",
                                  cell_name(s, a, h).c_str(), r);
                    report.add(buf);
                }
            }
        }
    }
    if (model.start_state() < 0 || model.start_state() >= S)
        report.add("start state out of range");
    return report;
}

}  // namespace smdplab
