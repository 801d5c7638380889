#include "smdplab/fhsmdp.hpp"

#include <cmath>
#include <cstdio>

namespace smdplab {

FhSmdp::FhSmdp(int num_states, int num_options, int horizon)
    : num_states_(num_states), num_options_(num_options), horizon_(horizon) {
    require(num_states >= 1 && num_options >= 1 && horizon >= 2,
            "FhSmdp requires S >= 1, O >= 1, H >= 2");
    kernel_.assign(num_cells(), {});
    reward_.assign(num_cells(), 0.0);
    admissible_.assign(num_cells(), 1);
}

ValidationReport validate_smdp(const FhSmdp& smdp) {
    ValidationReport report;
    char buf[160];
    const auto layout = smdp.layout();
    for (int h = 1; h < smdp.horizon(); ++h) {
        for (int o = 0; o < smdp.num_options(); ++o) {
            for (int s = 0; s < smdp.num_states(); ++s) {
                const SparseRow& row = smdp.kernel(s, o, h);
                Real sum = 0.0;
                int prev = -1;
                for (const auto& [omega, p] : row) {
                    if (p < 0.0) {
                        std::snprintf(buf, sizeof(buf),
                                      "negative kernel mass at (s=%d, o=%d, h=%d)", s, o, h);
                        report.add(buf);
                    }
                    if (omega < 0 || omega >= layout.size(h)) {
                        std::snprintf(buf, sizeof(buf),
                                      "kernel outcome outside (h, H] support at (s=%d, o=%d, h=%d)",
                                      s, o, h);
                        report.add(buf);
                    }
                    if (omega <= prev) {
                        std::snprintf(buf, sizeof(buf),
                                      "kernel row not sorted/unique at (s=%d, o=%d, h=%d)", s, o,
                                      h);
                        report.add(buf);
                    }
                    prev = omega;
                    sum += p;
                }
                if (std::abs(sum - 1.0) > 1e-12) {
                    std::snprintf(buf, sizeof(buf),
                                  "kernel row at (s=%d, o=%d, h=%d) sums to %.17g", s, o, h, sum);
                    report.add(buf);
                }
                const Real r = smdp.reward(s, o, h);
                const Real cap = static_cast<Real>(smdp.horizon() - h + 1);
                if (r < 0.0 || r > cap) {
                    std::snprintf(buf, sizeof(buf),
                                  "reward out of [0, H-h+1] at (s=%d, o=%d, h=%d): %.17g", s, o, h,
                                  r);
                    report.add(buf);
                }
            }
        }
    }
    if (smdp.start_state() < 0 || smdp.start_state() >= smdp.num_states())
        report.add("start state out of range");
    return report;
}

StageValueTable policy_value(const FhSmdp& smdp, const HighLevelPolicy& policy) {
    const int S = smdp.num_states();
    const int H = smdp.horizon();
    const auto layout = smdp.layout();
    StageValueTable table(S, H);

    // Backward sweep; cells without a defined choice evaluate to 0.
    for (int h = H - 1; h >= 1; --h) {
        for (int s = 0; s < S; ++s) {
            if (!policy.defined(s, h)) continue;
            const int o = policy.at(s, h);
            require(o < smdp.num_options(), "policy references an unknown option");
            Real v = smdp.reward(s, o, h);
            for (const auto& [omega, p] : smdp.kernel(s, o, h)) {
                const int sp = layout.next_state(omega);
                const int hp = layout.next_stage(h, omega);
                v += p * table.at(sp, hp);
            }
            table.at(s, h) = v;
        }
    }

    // Forward reachability from every stage-1 state: a decision epoch with an
    // undefined choice is a hard error.
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(S) * H, 0);
    for (int s = 0; s < S; ++s) reach[s] = 1;  // (s, h=1)
    for (int h = 1; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            if (!reach[static_cast<std::size_t>(h - 1) * S + s]) continue;
            if (!policy.defined(s, h)) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), "policy undefined at reachable (s=%d, h=%d)", s,
                              h);
                throw std::invalid_argument(buf);
            }
            const int o = policy.at(s, h);
            for (const auto& [omega, p] : smdp.kernel(s, o, h)) {
                if (p <= 0.0) continue;
                const int sp = layout.next_state(omega);
                const int hp = layout.next_stage(h, omega);
                if (hp < H) reach[static_cast<std::size_t>(hp - 1) * S + sp] = 1;
            }
        }
    }
    return table;
}

}  // namespace smdplab
