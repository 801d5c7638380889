#pragma once

#include "smdplab/fhmdp.hpp"
#include "smdplab/fhsmdp.hpp"
#include "smdplab/options.hpp"
#include "smdplab/rng.hpp"

#include <vector>

namespace smdplab {

/// One completed decision: option o chosen at (s, h) landed at (s', h')
/// after tau primitive steps, accumulating reward r.
struct DecisionRecord {
    int s, o, h, s_next, h_next;
    Real reward;
    int tau;
};

struct PrimitiveRecord {
    int s, a, h, s_next;
    Real reward;
};

struct EpisodeTrace {
    std::vector<DecisionRecord> decisions;
    std::vector<PrimitiveRecord> primitive_steps;

    int decision_count() const { return static_cast<int>(decisions.size()); }
    Real total_reward() const {
        Real r = 0.0;
        for (const auto& d : decisions) r += d.reward;
        return r;
    }
};

/// Sample one primitive step. Requires h < H.
std::pair<int, Real> step_primitive(const FhMdp& model, int s, int a, int h, Rng& rng);

/// Run an option from (s, h) until it terminates or the horizon is reached.
/// Termination is evaluated after each primitive step at the new (state,
/// stage), so the holding time is at least 1; a termination coin is only
/// tossed when 0 < beta < 1. Requires (s, h) in the initiation set and h < H.
/// When `trace` is given, every primitive step is appended to it.
DecisionRecord execute_option(const FhMdp& model, const OptionSpec& option, int s, int h,
                              Rng& rng, EpisodeTrace* trace = nullptr);

/// Exact semi-MDP induced by the option set: joint next-(state, stage)
/// kernel and expected cumulative rewards via forward dynamic programming
/// over each option's internal chain. Mass still running at the horizon is
/// assigned to termination at H (censored semantics). Cells outside the
/// initiation sets are marked non-admissible and carry a no-op placeholder
/// row.
FhSmdp flatten_to_smdp(const FhMdp& model, const OptionSet& options);

}  // namespace smdplab
