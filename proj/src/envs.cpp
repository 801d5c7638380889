#include "smdplab/envs.hpp"

#include <algorithm>
#include <array>
#include <queue>

namespace smdplab {

Environment make_chain_env(int length, int horizon, Real noise, int max_advance) {
    require(length >= 2, "make_chain_env: length must be at least 2");
    require(noise >= 0.0 && noise < 1.0, "make_chain_env: noise must be in [0, 1)");
    require(max_advance >= 1, "make_chain_env: max_advance must be at least 1");

    Environment env;
    env.mdp = FhMdp(length, 2, horizon);
    env.mdp.set_start_state(0);
    for (int s = 0; s < length; ++s) {
        Vec stay = Vec::Zero(length);
        stay(s) = 1.0;
        env.mdp.set_transition_row_all_stages(s, 0, stay);
        env.mdp.set_reward_all_stages(s, 0, 0.0, RewardKind::Deterministic);

        Vec advance = Vec::Zero(length);
        const int target = std::min(s + 1, length - 1);
        if (target == s) {
            advance(s) = 1.0;
        } else {
            advance(target) = 1.0 - noise;
            advance(s) = noise;
        }
        env.mdp.set_transition_row_all_stages(s, 1, advance);
        env.mdp.set_reward_all_stages(s, 1, static_cast<Real>(s + 1) / length,
                                      RewardKind::Bernoulli);
    }

    for (int k = 1; k <= max_advance; ++k) {
        OptionSpec opt("advance" + std::to_string(k), length, horizon);
        for (int h = 1; h <= horizon; ++h) {
            const bool on_grid = (h - 1) % k == 0;
            for (int s = 0; s < length; ++s) {
                opt.set_action(s, h, 1);
                opt.set_beta(s, h, (h == horizon || on_grid) ? 1.0 : 0.0);
                if (h < horizon && on_grid) opt.set_initiable(s, h);
            }
        }
        env.options.options.push_back(std::move(opt));
    }
    return env;
}

OptionSet make_geo_options(const FhMdp& chain_mdp, const std::vector<Real>& betas) {
    OptionSet set;
    const int S = chain_mdp.num_states();
    const int H = chain_mdp.horizon();
    for (std::size_t i = 0; i < betas.size(); ++i) {
        require(betas[i] > 0.0 && betas[i] <= 1.0, "make_geo_options: beta must be in (0, 1]");
        OptionSpec opt("geo" + std::to_string(i), S, H);
        for (int h = 1; h <= H; ++h) {
            for (int s = 0; s < S; ++s) {
                opt.set_action(s, h, 1);
                opt.set_beta(s, h, h == H ? 1.0 : betas[i]);
                if (h < H) opt.set_initiable(s, h);
            }
        }
        set.options.push_back(std::move(opt));
    }
    return set;
}

namespace {

struct Grid {
    int side;                       // 2*room + 1
    std::vector<int> cell_id;       // side*side, -1 for walls
    std::vector<std::pair<int, int>> coords;  // state -> (row, col)

    bool open(int r, int c) const {
        return r >= 0 && c >= 0 && r < side && c < side && cell_id[r * side + c] >= 0;
    }
    int id(int r, int c) const { return cell_id[r * side + c]; }
};

Grid build_four_rooms_grid(int room) {
    Grid g;
    g.side = 2 * room + 1;
    const int mid = room;
    const int door_lo = room / 2;
    const int door_hi = room + 1 + room / 2;
    g.cell_id.assign(static_cast<std::size_t>(g.side) * g.side, -1);
    for (int r = 0; r < g.side; ++r) {
        for (int c = 0; c < g.side; ++c) {
            const bool wall = (c == mid && r != door_lo && r != door_hi) ||
                              (r == mid && c != door_lo && c != door_hi);
            if (!wall) {
                g.cell_id[r * g.side + c] = static_cast<int>(g.coords.size());
                g.coords.emplace_back(r, c);
            }
        }
    }
    return g;
}

// Moves: 0 = up, 1 = down, 2 = left, 3 = right.
constexpr std::array<std::pair<int, int>, 4> kMoves = {
    {{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

/// BFS distances to `target` restricted to `region` cells (by state id).
std::vector<int> bfs_distances(const Grid& g, const std::vector<std::uint8_t>& region,
                               int target) {
    std::vector<int> dist(g.coords.size(), -1);
    std::queue<int> frontier;
    dist[target] = 0;
    frontier.push(target);
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop();
        const auto [r, c] = g.coords[s];
        for (const auto& [dr, dc] : kMoves) {
            if (!g.open(r + dr, c + dc)) continue;
            const int n = g.id(r + dr, c + dc);
            if (!region[n] || dist[n] >= 0) continue;
            dist[n] = dist[s] + 1;
            frontier.push(n);
        }
    }
    return dist;
}

/// Option that walks a shortest path to `target` within `region` and
/// terminates there; `loiter_at_target` keeps the target in the initiation
/// set with a wall-bump action so the option can be replayed in place.
OptionSpec make_goto_option(const std::string& name, const Grid& g, const FhMdp& mdp,
                            const std::vector<std::uint8_t>& region, int target,
                            bool loiter_at_target) {
    const int S = mdp.num_states();
    const int H = mdp.horizon();
    OptionSpec opt(name, S, H);
    const auto dist = bfs_distances(g, region, target);
    for (int s = 0; s < S; ++s) {
        if (!region[s] || dist[s] < 0) continue;
        int action = -1;
        if (s == target) {
            // pick a direction that bumps into a wall, so the agent stays put
            const auto [r, c] = g.coords[s];
            for (int a = 0; a < 4; ++a)
                if (!g.open(r + kMoves[a].first, c + kMoves[a].second)) {
                    action = a;
                    break;
                }
            if (action < 0) action = 0;
        } else {
            const auto [r, c] = g.coords[s];
            for (int a = 0; a < 4; ++a) {
                if (!g.open(r + kMoves[a].first, c + kMoves[a].second)) continue;
                const int n = g.id(r + kMoves[a].first, c + kMoves[a].second);
                if (region[n] && dist[n] == dist[s] - 1) {
                    action = a;
                    break;
                }
            }
        }
        for (int h = 1; h <= H; ++h) {
            opt.set_action(s, h, action);
            if (h < H && (s != target || loiter_at_target)) opt.set_initiable(s, h);
        }
    }
    for (int h = 1; h <= H; ++h) {
        for (int s = 0; s < S; ++s) {
            if (h == H || s == target) opt.set_beta(s, h, 1.0);
        }
    }
    return opt;
}

}  // namespace

Environment make_four_rooms_env(int room, int horizon, Real noise) {
    require(room >= 2, "make_four_rooms_env: room must be at least 2");
    require(noise >= 0.0 && noise < 1.0, "make_four_rooms_env: noise must be in [0, 1)");

    const Grid g = build_four_rooms_grid(room);
    const int S = static_cast<int>(g.coords.size());
    const int side = g.side;
    const int mid = room;
    const int door_lo = room / 2;
    const int door_hi = room + 1 + room / 2;

    Environment env;
    env.mdp = FhMdp(S, 4, horizon);
    env.mdp.set_start_state(g.id(0, 0));
    const int goal = g.id(side - 1, side - 1);

    for (int s = 0; s < S; ++s) {
        const auto [r, c] = g.coords[s];
        for (int a = 0; a < 4; ++a) {
            Vec row = Vec::Zero(S);
            const int nr = r + kMoves[a].first;
            const int nc = c + kMoves[a].second;
            if (g.open(nr, nc)) {
                row(g.id(nr, nc)) = 1.0 - noise;
                row(s) += noise;
            } else {
                row(s) = 1.0;
            }
            env.mdp.set_transition_row_all_stages(s, a, row);
            env.mdp.set_reward_all_stages(s, a, s == goal ? 1.0 : 0.0,
                                          RewardKind::Deterministic);
        }
    }

    // Rooms in reading order: top-left, top-right, bottom-left, bottom-right.
    const int door_top = g.id(door_lo, mid);
    const int door_bottom = g.id(door_hi, mid);
    const int door_left = g.id(mid, door_lo);
    const int door_right = g.id(mid, door_hi);

    auto room_region = [&](bool top, bool left) {
        std::vector<std::uint8_t> region(S, 0);
        for (int s = 0; s < S; ++s) {
            const auto [r, c] = g.coords[s];
            if (r != mid && c != mid && (r < mid) == top && (c < mid) == left) region[s] = 1;
        }
        return region;
    };
    auto with_doors = [&](std::vector<std::uint8_t> region, int d1, int d2) {
        region[d1] = 1;
        region[d2] = 1;
        return region;
    };

    const auto tl = with_doors(room_region(true, true), door_top, door_left);
    const auto tr = with_doors(room_region(true, false), door_top, door_right);
    const auto bl = with_doors(room_region(false, true), door_left, door_bottom);
    const auto br = with_doors(room_region(false, false), door_bottom, door_right);

    env.options.options.push_back(make_goto_option("tl-top", g, env.mdp, tl, door_top, false));
    env.options.options.push_back(make_goto_option("tl-left", g, env.mdp, tl, door_left, false));
    env.options.options.push_back(make_goto_option("tr-top", g, env.mdp, tr, door_top, false));
    env.options.options.push_back(
        make_goto_option("tr-right", g, env.mdp, tr, door_right, false));
    env.options.options.push_back(make_goto_option("bl-left", g, env.mdp, bl, door_left, false));
    env.options.options.push_back(
        make_goto_option("bl-bottom", g, env.mdp, bl, door_bottom, false));
    env.options.options.push_back(
        make_goto_option("br-bottom", g, env.mdp, br, door_bottom, false));
    env.options.options.push_back(
        make_goto_option("br-right", g, env.mdp, br, door_right, false));
    env.options.options.push_back(make_goto_option("br-goal", g, env.mdp, br, goal, true));
    return env;
}

}  // namespace smdplab
