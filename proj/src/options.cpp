#include "smdplab/options.hpp"

#include <cstdio>
#include <queue>

namespace smdplab {

namespace {

/// Cells (s, h) an option can occupy while executing, starting anywhere in
/// its initiation set: follow the internal policy through positive-probability
/// transitions until termination is certain or the horizon is reached.
std::vector<std::pair<int, int>> reachable_cells(const OptionSpec& opt, const FhMdp& model) {
    const int S = model.num_states();
    const int H = model.horizon();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(S) * H, 0);
    std::queue<std::pair<int, int>> frontier;
    std::vector<std::pair<int, int>> out;

    auto push = [&](int s, int h) {
        auto& flag = seen[static_cast<std::size_t>(h - 1) * S + s];
        if (!flag) {
            flag = 1;
            frontier.emplace(s, h);
            out.emplace_back(s, h);
        }
    };
    for (int h = 1; h < H; ++h)
        for (int s = 0; s < S; ++s)
            if (opt.initiable(s, h)) push(s, h);

    while (!frontier.empty()) {
        auto [s, h] = frontier.front();
        frontier.pop();
        if (h >= H) continue;
        const int a = opt.action(s, h);
        if (a < 0) continue;  // undefined policy reported by the caller
        for (int sp = 0; sp < S; ++sp) {
            if (model.transition(s, a, h, sp) <= 0.0) continue;
            const int hp = h + 1;
            if (hp >= H) continue;              // episode boundary stops execution
            if (opt.beta(sp, hp) >= 1.0) continue;  // certain termination
            push(sp, hp);
        }
    }
    return out;
}

}  // namespace

ValidationReport validate_option_set(const OptionSet& options, const FhMdp& model) {
    ValidationReport report;
    const int S = model.num_states();
    const int H = model.horizon();
    char buf[160];

    for (int o = 0; o < options.size(); ++o) {
        const OptionSpec& opt = options[o];
        if (opt.termination.rows() != S || opt.termination.cols() != H) {
            report.add("option " + opt.id + ": termination table has wrong shape");
            continue;
        }
        for (int h = 1; h <= H; ++h) {
            for (int s = 0; s < S; ++s) {
                const Real b = opt.beta(s, h);
                if (b < 0.0 || b > 1.0) {
                    std::snprintf(buf, sizeof(buf),
                                  "option %s: termination out of [0,1] at (s=%d, h=%d)",
                                  opt.id.c_str(), s, h);
                    report.add(buf);
                }
            }
        }
        for (int s = 0; s < S; ++s) {
            if (opt.beta(s, H) < 1.0) {
                std::snprintf(buf, sizeof(buf),
                              "option %s: termination at the horizon must be 1 (s=%d, beta=%g)",
                              opt.id.c_str(), s, opt.beta(s, H));
                report.add(buf);
            }
        }
        for (const auto& [s, h] : reachable_cells(opt, model)) {
            if (opt.action(s, h) < 0) {
                std::snprintf(buf, sizeof(buf),
                              "option %s: internal policy undefined at reachable (s=%d, h=%d)",
                              opt.id.c_str(), s, h);
                report.add(buf);
            } else if (opt.action(s, h) >= model.num_actions()) {
                std::snprintf(buf, sizeof(buf),
                              "option %s: internal policy action out of range at (s=%d, h=%d)",
                              opt.id.c_str(), s, h);
                report.add(buf);
            }
        }
    }

    // Admissibility: wherever an option may terminate before the horizon,
    // some option must be initiable.
    for (int o = 0; o < options.size(); ++o) {
        const OptionSpec& opt = options[o];
        for (int h = 2; h < H; ++h) {
            for (int s = 0; s < S; ++s) {
                if (opt.beta(s, h) <= 0.0) continue;
                if (options.initiable_at(s, h).empty()) {
                    std::snprintf(
                        buf, sizeof(buf),
                        "admissibility: option %s may terminate at (s=%d, h=%d) "
                        "but no option is initiable there",
                        opt.id.c_str(), s, h);
                    report.add(buf);
                }
            }
        }
    }
    for (int s = 0; s < S; ++s) {
        if (options.initiable_at(s, 1).empty()) {
            std::snprintf(buf, sizeof(buf), "no option initiable at the initial stage (s=%d, h=1)",
                          s);
            report.add(buf);
        }
    }
    return report;
}

OptionSet make_primitive_options(const FhMdp& model) {
    OptionSet set;
    const int S = model.num_states();
    const int H = model.horizon();
    for (int a = 0; a < model.num_actions(); ++a) {
        OptionSpec opt("act" + std::to_string(a), S, H);
        for (int h = 1; h <= H; ++h) {
            for (int s = 0; s < S; ++s) {
                if (h < H) opt.set_initiable(s, h);
                opt.set_beta(s, h, 1.0);
                opt.set_action(s, h, a);
            }
        }
        set.options.push_back(std::move(opt));
    }
    return set;
}

}  // namespace smdplab
