#include "smdplab/simulate.hpp"

#include <cstdio>

namespace smdplab {

std::pair<int, Real> step_primitive(const FhMdp& model, int s, int a, int h, Rng& rng) {
    require(h >= 1 && h < model.horizon(), "step_primitive: stage must satisfy 1 <= h < H");
    require(s >= 0 && s < model.num_states(), "step_primitive: state out of range");
    require(a >= 0 && a < model.num_actions(), "step_primitive: action out of range");

    const Mat& tr = model.transition_matrix(a, h);
    const Real u = rng.uniform();
    Real cum = 0.0;
    int s_next = 0;
    for (int sp = 0; sp < model.num_states(); ++sp) {
        const Real p = tr(s, sp);
        if (p <= 0.0) continue;
        cum += p;
        s_next = sp;
        if (u < cum) break;
    }

    const Real mean = model.reward_mean(s, a, h);
    Real reward = mean;
    if (model.reward_kind(s, a, h) == RewardKind::Bernoulli)
        reward = rng.bernoulli(mean) ? 1.0 : 0.0;
    return {s_next, reward};
}

DecisionRecord execute_option(const FhMdp& model, const OptionSpec& option, int s, int h,
                              Rng& rng, EpisodeTrace* trace) {
    require(h >= 1 && h < model.horizon(), "execute_option: stage must satisfy 1 <= h < H");
    if (!option.initiable(s, h)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "option %s not initiable at (s=%d, h=%d)",
                      option.id.c_str(), s, h);
        throw std::invalid_argument(buf);
    }

    DecisionRecord rec{s, -1, h, s, h, 0.0, 0};
    int cur = s;
    int stage = h;
    const int H = model.horizon();
    while (true) {
        const int a = option.action(cur, stage);
        if (a < 0) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "option %s has no action at (s=%d, h=%d)",
                          option.id.c_str(), cur, stage);
            throw std::invalid_argument(buf);
        }
        auto [s_next, r] = step_primitive(model, cur, a, stage, rng);
        if (trace) trace->primitive_steps.push_back({cur, a, stage, s_next, r});
        rec.reward += r;
        rec.tau += 1;
        cur = s_next;
        stage += 1;
        if (stage >= H) break;
        const Real b = option.beta(cur, stage);
        if (b >= 1.0) break;
        if (b <= 0.0) continue;
        if (rng.uniform() < b) break;
    }
    rec.s_next = cur;
    rec.h_next = stage;
    return rec;
}

FhSmdp flatten_to_smdp(const FhMdp& model, const OptionSet& options) {
    const int S = model.num_states();
    const int H = model.horizon();
    const int O = options.size();
    FhSmdp smdp(S, O, H);
    smdp.set_start_state(model.start_state());
    const auto layout = smdp.layout();

    std::vector<Real> alive(S), next_alive(S);
    std::vector<Real> outcome(static_cast<std::size_t>(layout.size(1)), 0.0);

    for (int h = 1; h < H; ++h) {
        for (int o = 0; o < O; ++o) {
            const OptionSpec& opt = options[o];
            for (int s = 0; s < S; ++s) {
                if (!opt.initiable(s, h)) {
                    // no-op placeholder: stay put for one stage, zero reward
                    smdp.set_admissible(s, o, h, false);
                    smdp.set_kernel(s, o, h, {{layout.index(h, s, h + 1), 1.0}});
                    smdp.set_reward(s, o, h, 0.0);
                    continue;
                }
                std::fill(alive.begin(), alive.end(), 0.0);
                std::fill(outcome.begin(), outcome.begin() + layout.size(h), 0.0);
                alive[s] = 1.0;
                Real alive_total = 1.0;
                Real expected_reward = 0.0;
                for (int t = h; t < H && alive_total > 0.0; ++t) {
                    std::fill(next_alive.begin(), next_alive.end(), 0.0);
                    for (int x = 0; x < S; ++x) {
                        const Real mass = alive[x];
                        if (mass <= 0.0) continue;
                        const int a = opt.action(x, t);
                        require(a >= 0, "flatten_to_smdp: option policy undefined on a "
                                        "reachable cell (validate the option set)");
                        expected_reward += mass * model.reward_mean(x, a, t);
                        const Mat& tr = model.transition_matrix(a, t);
                        for (int xp = 0; xp < S; ++xp) {
                            const Real p = tr(x, xp);
                            if (p <= 0.0) continue;
                            next_alive[xp] += mass * p;
                        }
                    }
                    const int tp = t + 1;
                    if (tp >= H) {
                        for (int xp = 0; xp < S; ++xp)
                            if (next_alive[xp] > 0.0)
                                outcome[layout.index(h, xp, H)] += next_alive[xp];
                        break;
                    }
                    alive_total = 0.0;
                    for (int xp = 0; xp < S; ++xp) {
                        const Real mass = next_alive[xp];
                        if (mass <= 0.0) continue;
                        const Real b = opt.beta(xp, tp);
                        if (b > 0.0) outcome[layout.index(h, xp, tp)] += mass * b;
                        next_alive[xp] = mass * (1.0 - b);
                        alive_total += next_alive[xp];
                    }
                    std::swap(alive, next_alive);
                }
                SparseRow row;
                for (int omega = 0; omega < layout.size(h); ++omega)
                    if (outcome[omega] > 0.0) row.emplace_back(omega, outcome[omega]);
                smdp.set_kernel(s, o, h, std::move(row));
                smdp.set_reward(s, o, h, expected_reward);
            }
        }
    }
    return smdp;
}

}  // namespace smdplab
