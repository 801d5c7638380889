#include "smdplab/planning.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace smdplab {

namespace {

constexpr Real kNegInf = -std::numeric_limits<Real>::infinity();

/// Running best continuation outcome over stages h' > h, updated as the
/// backward sweep exposes new columns. Ties prefer the earlier stage, then
/// the lower state, matching the ascending-outcome-index convention.
struct BestOutcome {
    Real value = 0.0;
    int stage = 0;
    int state = 0;

    void absorb_column(const StageValueTable& v, int h_col) {
        Real col_max = kNegInf;
        int arg = 0;
        for (int s = 0; s < v.num_states(); ++s) {
            if (v.at(s, h_col) > col_max) {
                col_max = v.at(s, h_col);
                arg = s;
            }
        }
        if (stage == 0 || col_max >= value) {
            value = col_max;
            stage = h_col;
            state = arg;
        }
    }
};

}  // namespace

Vec optimistic_row(const Vec& p_hat, Real beta, const Vec& values) {
    const auto n = p_hat.size();
    require(n > 0 && values.size() == n, "optimistic_row: shape mismatch");
    require(beta >= 0.0, "optimistic_row: radius must be non-negative");
    Real sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        require(p_hat(i) >= 0.0, "optimistic_row: negative probability");
        sum += p_hat(i);
    }
    require(std::abs(sum - 1.0) <= 1e-9, "optimistic_row: row must sum to 1");

    int best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (values(i) > values(best)) best = static_cast<int>(i);

    Vec p = p_hat;
    const Real eps = std::min(beta / 2.0, 1.0 - p(best));
    p(best) += eps;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return values(a) != values(b) ? values(a) < values(b) : a < b;
    });
    Real budget = eps;
    for (const int idx : order) {
        if (budget <= 0.0) break;
        if (idx == best) continue;
        const Real take = std::min(budget, p(idx));
        p(idx) -= take;
        budget -= take;
    }
    return p;
}

ExactSolution exact_backward_induction(const FhSmdp& smdp) {
    const int S = smdp.num_states();
    const int H = smdp.horizon();
    const auto layout = smdp.layout();
    ExactSolution sol{StageValueTable(S, H), HighLevelPolicy(S, H)};

    for (int h = H - 1; h >= 1; --h) {
        for (int s = 0; s < S; ++s) {
            Real best_q = kNegInf;
            int best_o = -1;
            for (int o = 0; o < smdp.num_options(); ++o) {
                if (!smdp.admissible(s, o, h)) continue;
                Real q = smdp.reward(s, o, h);
                for (const auto& [omega, p] : smdp.kernel(s, o, h))
                    q += p * sol.v.at(layout.next_state(omega), layout.next_stage(h, omega));
                if (q > best_q) {
                    best_q = q;
                    best_o = o;
                }
            }
            if (best_o >= 0) {
                sol.v.at(s, h) = best_q;
                sol.policy.set(s, h, best_o);
            }
        }
    }
    return sol;
}

OptimisticSolution extended_value_iteration(const ConfidenceModel& conf, int horizon) {
    require(conf.joint, "extended_value_iteration expects joint-outcome confidence input");
    require(conf.horizon == horizon, "extended_value_iteration: horizon mismatch");
    const int S = conf.num_states;
    const int O = conf.num_choices;
    const int H = horizon;
    const JointOutcomeLayout layout{S, H};

    OptimisticSolution sol;
    sol.num_states = S;
    sol.num_choices = O;
    sol.horizon = H;
    sol.v = StageValueTable(S, H);
    sol.policy = HighLevelPolicy(S, H);
    sol.q.assign(static_cast<std::size_t>(S) * O * (H - 1), kNegInf);

    BestOutcome best;
    best.absorb_column(sol.v, H);
    std::vector<std::pair<Real, int>> order;
    std::vector<Real> mass;
    SparseRow uniform;

    for (int h = H - 1; h >= 1; --h) {
        if (h < H - 1) best.absorb_column(sol.v, h + 1);
        const int best_omega = layout.index(h, best.state, best.stage);
        const Real cap = static_cast<Real>(H - h + 1);
        auto value_at = [&](int omega) {
            return sol.v.at(layout.next_state(omega), layout.next_stage(h, omega));
        };

        for (int o = 0; o < O; ++o) {
            for (int s = 0; s < S; ++s) {
                const int i = conf.cell(s, o, h);
                if (!conf.admissible[i]) continue;
                const Real reward_term = std::min(conf.r_hat[i] + conf.beta_r[i], cap);
                Real expect;
                if (conf.n[i] == 0 && conf.beta_p[i] >= 2.0) {
                    expect = best.value;
                } else if (conf.n[i] == 0) {
                    // radius below the simplex diameter with no data: spell
                    // out the uniform row
                    const int size = layout.size(h);
                    uniform.clear();
                    const Real u = 1.0 / static_cast<Real>(size);
                    for (int omega = 0; omega < size; ++omega) uniform.emplace_back(omega, u);
                    expect = detail::optimistic_expectation(uniform, conf.beta_p[i], best_omega,
                                                            best.value, value_at, order, mass);
                } else {
                    expect = detail::optimistic_expectation(conf.p_hat[i], conf.beta_p[i],
                                                            best_omega, best.value, value_at,
                                                            order, mass);
                }
                sol.q[i] = reward_term + expect;
            }
        }
        for (int s = 0; s < S; ++s) {
            Real best_q = kNegInf;
            int best_o = -1;
            for (int o = 0; o < O; ++o) {
                const Real q = sol.q[conf.cell(s, o, h)];
                if (q > best_q) {
                    best_q = q;
                    best_o = o;
                }
            }
            if (best_o >= 0 && best_q > kNegInf) {
                sol.v.at(s, h) = std::min(cap, best_q);
                sol.policy.set(s, h, best_o);
            }
        }
    }
    return sol;
}

OptimisticSolution flat_evi(const ConfidenceModel& conf, int horizon) {
    require(!conf.joint, "flat_evi expects flat confidence input");
    require(conf.horizon == horizon, "flat_evi: horizon mismatch");
    const int S = conf.num_states;
    const int A = conf.num_choices;
    const int H = horizon;

    OptimisticSolution sol;
    sol.num_states = S;
    sol.num_choices = A;
    sol.horizon = H;
    sol.v = StageValueTable(S, H);
    sol.policy = HighLevelPolicy(S, H);
    sol.q.assign(static_cast<std::size_t>(S) * A * (H - 1), kNegInf);

    std::vector<std::pair<Real, int>> order;
    std::vector<Real> mass;
    SparseRow uniform;

    for (int h = H - 1; h >= 1; --h) {
        Real best_value = kNegInf;
        int best_state = 0;
        for (int s = 0; s < S; ++s) {
            if (sol.v.at(s, h + 1) > best_value) {
                best_value = sol.v.at(s, h + 1);
                best_state = s;
            }
        }
        const Real cap = static_cast<Real>(H - h + 1);
        auto value_at = [&](int s_next) { return sol.v.at(s_next, h + 1); };

        for (int a = 0; a < A; ++a) {
            for (int s = 0; s < S; ++s) {
                const int i = conf.cell(s, a, h);
                if (!conf.admissible[i]) continue;
                const Real reward_term = std::min(conf.r_hat[i] + conf.beta_r[i], cap);
                Real expect;
                if (conf.n[i] == 0 && conf.beta_p[i] >= 2.0) {
                    expect = best_value;
                } else if (conf.n[i] == 0) {
                    uniform.clear();
                    const Real u = 1.0 / static_cast<Real>(S);
                    for (int sp = 0; sp < S; ++sp) uniform.emplace_back(sp, u);
                    expect = detail::optimistic_expectation(uniform, conf.beta_p[i], best_state,
                                                            best_value, value_at, order, mass);
                } else {
                    expect = detail::optimistic_expectation(conf.p_hat[i], conf.beta_p[i],
                                                            best_state, best_value, value_at,
                                                            order, mass);
                }
                sol.q[i] = reward_term + expect;
            }
        }
        for (int s = 0; s < S; ++s) {
            Real best_q = kNegInf;
            int best_a = -1;
            for (int a = 0; a < A; ++a) {
                const Real q = sol.q[conf.cell(s, a, h)];
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            if (best_a >= 0 && best_q > kNegInf) {
                sol.v.at(s, h) = std::min(cap, best_q);
                sol.policy.set(s, h, best_a);
            }
        }
    }
    return sol;
}

ExactSolution flat_backward_induction(const FhMdp& mdp) {
    const int S = mdp.num_states();
    const int H = mdp.horizon();
    ExactSolution sol{StageValueTable(S, H), HighLevelPolicy(S, H)};
    for (int h = H - 1; h >= 1; --h) {
        for (int s = 0; s < S; ++s) {
            Real best_q = kNegInf;
            int best_a = -1;
            for (int a = 0; a < mdp.num_actions(); ++a) {
                Real q = mdp.reward_mean(s, a, h);
                const Mat& tr = mdp.transition_matrix(a, h);
                for (int sp = 0; sp < S; ++sp) q += tr(s, sp) * sol.v.at(sp, h + 1);
                if (q > best_q) {
                    best_q = q;
                    best_a = a;
                }
            }
            sol.v.at(s, h) = best_q;
            sol.policy.set(s, h, best_a);
        }
    }
    return sol;
}

StageValueTable flat_policy_value(const FhMdp& mdp, const HighLevelPolicy& policy) {
    const int S = mdp.num_states();
    const int H = mdp.horizon();
    StageValueTable table(S, H);
    for (int h = H - 1; h >= 1; --h) {
        for (int s = 0; s < S; ++s) {
            require(policy.defined(s, h), "flat_policy_value: policy undefined");
            const int a = policy.at(s, h);
            Real v = mdp.reward_mean(s, a, h);
            const Mat& tr = mdp.transition_matrix(a, h);
            for (int sp = 0; sp < S; ++sp) v += tr(s, sp) * table.at(sp, h + 1);
            table.at(s, h) = v;
        }
    }
    return table;
}

}  // namespace smdplab
