#pragma once

#include "smdplab/fhmdp.hpp"
#include "smdplab/options.hpp"

#include <vector>

namespace smdplab {

struct Environment {
    FhMdp mdp;
    OptionSet options;
};

/// Directional chain. Action 0 stays put; action 1 advances one cell with
/// probability 1 - noise (slips in place otherwise) and pays a Bernoulli
/// reward with mean (s + 1) / length. Options are "advance k cells" macros
/// for k = 1..max_advance: the internal policy always advances and the
/// option terminates on the stage grid h = 1 (mod k), so it runs exactly k
/// primitive steps away from the horizon boundary.
Environment make_chain_env(int length, int horizon, Real noise, int max_advance = 3);

/// Chain with geometrically terminating advance options: one option per
/// entry of `betas`, initiable everywhere, terminating after each step with
/// the given probability.
OptionSet make_geo_options(const FhMdp& chain_mdp, const std::vector<Real>& betas);

/// Four-room gridworld. The grid is (2*room + 1) square with a wall cross
/// and four doorways; moves that hit a wall stay put, and any move slips in
/// place with probability `noise`. The goal is the far corner and pays
/// reward 1 on every action taken there. Options: per room, one
/// shortest-path option to each of its two doorways, plus a shortest-path
/// option to the goal inside the goal room (which also loiters at the goal
/// one step at a time).
Environment make_four_rooms_env(int room, int horizon, Real noise = 0.0);

}  // namespace smdplab
