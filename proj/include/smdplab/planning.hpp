#pragma once

#include "smdplab/fhmdp.hpp"
#include "smdplab/fhsmdp.hpp"
#include "smdplab/stats.hpp"
#include "smdplab/types.hpp"

#include <algorithm>
#include <vector>

namespace smdplab {

struct ExactSolution {
    StageValueTable v;
    HighLevelPolicy policy;
};

/// Optimal value and a deterministic optimal policy by backward induction,
/// maximizing over admissible cells; ties break to the lowest option id.
/// Cells with no admissible option get value 0 and an undefined choice.
ExactSolution exact_backward_induction(const FhSmdp& smdp);

struct OptimisticSolution {
    std::vector<Real> q;  // per (s, o, h) cell; -inf where not admissible
    StageValueTable v;
    HighLevelPolicy policy;

    int num_states = 0, num_choices = 0, horizon = 0;
    int cell(int s, int c, int h) const {
        return ((h - 1) * num_choices + c) * num_states + s;
    }
};

/// Distribution maximizing the expected value over the L1 ball of radius
/// beta around p_hat, intersected with the simplex: move min(beta/2,
/// 1 - p_hat(best)) onto the highest-value outcome, then drain the same mass
/// from the lowest-value outcomes. Ties break to the lowest index.
Vec optimistic_row(const Vec& p_hat, Real beta, const Vec& values);

/// Optimistic backward induction over joint (next state, landing stage)
/// outcomes: Q(s,o,h) = min(r_hat + beta_r, H-h+1) + max over the transition
/// ball of the continuation value, V(s,h) = min(H-h+1, max_o Q).
OptimisticSolution extended_value_iteration(const ConfidenceModel& confidence, int horizon);

/// Same contract specialized to single-stage transitions (h' = h + 1).
OptimisticSolution flat_evi(const ConfidenceModel& confidence, int horizon);

/// Exact planning and policy evaluation on the primitive model.
ExactSolution flat_backward_induction(const FhMdp& mdp);
StageValueTable flat_policy_value(const FhMdp& mdp, const HighLevelPolicy& policy);

namespace detail {

/// Shared inner step of both optimistic planners. `p_hat` is the sparse
/// empirical row (sorted by outcome index), `best_omega/best_value` the
/// argmax of `value` over the full admissible outcome space. Mirrors
/// optimistic_row arithmetic exactly so the two planners agree bit-for-bit
/// on matching inputs.
template <class ValueFn>
Real optimistic_expectation(const SparseRow& p_hat, Real beta, int best_omega, Real best_value,
                            ValueFn&& value, std::vector<std::pair<Real, int>>& order,
                            std::vector<Real>& mass) {
    order.clear();
    mass.clear();
    Real p_best = 0.0;
    for (const auto& [omega, p] : p_hat) {
        if (omega == best_omega) p_best = p;
        order.emplace_back(value(omega), omega);
        mass.push_back(p);
    }
    const Real eps = std::min(beta / 2.0, 1.0 - p_best);

    // indices into `mass`, ordered by (value, outcome index) ascending
    std::sort(order.begin(), order.end());
    Real budget = eps;
    for (const auto& [val, omega] : order) {
        if (budget <= 0.0) break;
        if (omega == best_omega) continue;
        auto it = std::lower_bound(p_hat.begin(), p_hat.end(), omega,
                                   [](const auto& e, int key) { return e.first < key; });
        const auto k = static_cast<std::size_t>(it - p_hat.begin());
        const Real take = std::min(budget, mass[k]);
        mass[k] -= take;
        budget -= take;
    }

    Real expectation = 0.0;
    bool best_added = false;
    for (std::size_t k = 0; k < p_hat.size(); ++k) {
        const int omega = p_hat[k].first;
        if (!best_added && omega >= best_omega) {
            const Real p = (omega == best_omega ? mass[k] : 0.0) + eps;
            expectation += p * best_value;
            best_added = true;
            if (omega == best_omega) continue;
        }
        expectation += mass[k] * value(omega);
    }
    if (!best_added) expectation += eps * best_value;
    return expectation;
}

}  // namespace detail

}  // namespace smdplab
