#pragma once

#include "smdplab/agents.hpp"
#include "smdplab/fhsmdp.hpp"

#include <optional>

namespace smdplab {

/// Duration profile of an option model. t_bar is the worst-cell second
/// moment scale sqrt(E[tau^2]); tau_mean averages E[tau] over admissible
/// decision cells; tau_min/tau_max span the support; d_expected = H / tau_mean.
struct OptionStatsSummary {
    Real t_bar = 0.0;
    Real tau_mean = 0.0;
    Real tau_min = 0.0;
    Real tau_max = 0.0;
    Real d_expected = 0.0;
    std::vector<Real> per_option_mean;  // E[tau] per option, averaged over states at h = 1
};

/// Exact holding-time moments from the joint kernel.
OptionStatsSummary option_stats(const FhSmdp& smdp);
/// Same aggregation over the empirical kernel of visited cells.
OptionStatsSummary option_stats(const SufficientStats& stats);

/// Recompute the regret columns of a log against the given oracle value.
void compute_regret(RunLog& log, Real v_star);

/// Regret-shape calculators: unit constants, logarithmic factors dropped.
Real theorem1_bound(Real S, Real O, Real K, Real d, Real t_bar, Real H);
Real corollary1_bound(Real S, Real O, Real K, Real tau_bar, Real H);
Real theorem2_bound(Real K, Real H_o, Real S_o, Real A_o, Real O, Real H, Real S);

/// Episode count below which the two-phase shape beats the flat one, and
/// the bound ratio at a given K (scaling A_o = alpha A, S_o = alpha S,
/// H_o = alpha H).
Real crossover_episodes(Real H, Real S, Real A, Real alpha, Real O);
Real bound_ratio(Real K, Real H, Real S, Real A, Real alpha, Real O);

/// High-probability bound on the number of decisions in one episode, from
/// the renewal-function concentration with range (tau_max - tau_min).
Real renewal_bound(Real tau_min, Real tau_max, Real tau_expect_min, Real H, Real delta);

struct PdlCheck {
    Real lhs = 0.0;
    Real rhs = 0.0;
    Real gap() const { return std::abs(lhs - rhs); }
};

/// Numerical check of the performance-difference identity between two
/// models of the same shape under one policy: the value gap at the start
/// equals the expected sum, over decision epochs of model b, of the reward
/// difference plus the transition difference weighted by model a's values.
/// Computed by exhaustive enumeration of the decision-epoch distribution.
PdlCheck verify_pdl(const FhSmdp& smdp_a, const FhSmdp& smdp_b, const HighLevelPolicy& policy);

/// Value lost by planning over the option model instead of the primitive
/// one: flat optimum minus option-model optimum at the start state.
Real bias_term(const FhMdp& mdp, const OptionSet& options);

struct CoverageReport {
    Real fraction = 0.0;
    Real bound = 0.0;
    bool pass = false;
};

/// Fraction of logged episodes whose decision count stays within `bound`;
/// passes when it reaches 1 - delta.
CoverageReport empirical_d_vs_bound(const RunLog& log, Real bound, Real delta);

/// Bound-calculator outputs with their inputs echoed; all values are shape
/// evaluations with unit constants, not certified numbers.
struct BoundReport {
    Real S = 0, O = 0, K = 0, d = 0, t_bar = 0, tau_bar = 0, H = 0;
    Real S_o = 0, A_o = 0, H_o = 0, A = 0, alpha = 0, delta = 0;
    Real tau_min = 0, tau_max = 0, tau_expect_min = 0;
    Real theorem1_value = 0;
    Real corollary1_value = 0;
    Real theorem2_value = 0;
    Real ratio = 0;
    Real crossover_K = 0;
    Real renewal_value = 0;

    std::string text() const;
    std::string csv() const;
};

/// Evaluate every calculator on one parameter set.
BoundReport make_bound_report(Real S, Real O, Real K, Real d, Real t_bar, Real tau_bar, Real H,
                              Real S_o, Real A_o, Real H_o, Real A, Real alpha, Real delta,
                              Real tau_min, Real tau_max, Real tau_expect_min);

}  // namespace smdplab
