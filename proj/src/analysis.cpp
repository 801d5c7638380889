#include "smdplab/analysis.hpp"

#include "smdplab/planning.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace smdplab {

namespace {

struct TauMoments {
    Real mean = 0.0;
    Real second = 0.0;
    Real lo = 0.0;
    Real hi = 0.0;
    bool any = false;
};

TauMoments row_moments(const SparseRow& row, int h, int S) {
    TauMoments m;
    for (const auto& [omega, p] : row) {
        if (p <= 0.0) continue;
        const Real tau = static_cast<Real>(1 + omega / S);  // h' - h
        m.mean += p * tau;
        m.second += p * tau * tau;
        m.lo = m.any ? std::min(m.lo, tau) : tau;
        m.hi = m.any ? std::max(m.hi, tau) : tau;
        m.any = true;
    }
    (void)h;
    return m;
}

OptionStatsSummary summarize(int S, int O, int H,
                             const std::function<const SparseRow*(int, int, int)>& row_at) {
    OptionStatsSummary out;
    out.per_option_mean.assign(O, 0.0);
    Real mean_acc = 0.0;
    long cells = 0;
    bool any = false;
    for (int h = 1; h < H; ++h) {
        for (int o = 0; o < O; ++o) {
            for (int s = 0; s < S; ++s) {
                const SparseRow* row = row_at(s, o, h);
                if (!row) continue;
                const TauMoments m = row_moments(*row, h, S);
                if (!m.any) continue;
                out.t_bar = std::max(out.t_bar, std::sqrt(m.second));
                out.tau_min = any ? std::min(out.tau_min, m.lo) : m.lo;
                out.tau_max = any ? std::max(out.tau_max, m.hi) : m.hi;
                mean_acc += m.mean;
                cells += 1;
                any = true;
            }
        }
    }
    if (cells > 0) out.tau_mean = mean_acc / static_cast<Real>(cells);
    if (out.tau_mean > 0.0) out.d_expected = static_cast<Real>(H) / out.tau_mean;
    // stationary per-option durations, taken at the first stage
    for (int o = 0; o < O; ++o) {
        Real acc = 0.0;
        long n = 0;
        for (int s = 0; s < S; ++s) {
            const SparseRow* row = row_at(s, o, 1);
            if (!row) continue;
            const TauMoments m = row_moments(*row, 1, S);
            if (!m.any) continue;
            acc += m.mean;
            n += 1;
        }
        out.per_option_mean[o] = n > 0 ? acc / static_cast<Real>(n) : 0.0;
    }
    return out;
}

}  // namespace

OptionStatsSummary option_stats(const FhSmdp& smdp) {
    return summarize(smdp.num_states(), smdp.num_options(), smdp.horizon(),
                     [&](int s, int o, int h) -> const SparseRow* {
                         if (!smdp.admissible(s, o, h)) return nullptr;
                         return &smdp.kernel(s, o, h);
                     });
}

OptionStatsSummary option_stats(const SufficientStats& stats) {
    // Empirical kernel of visited cells: counts normalized per cell.
    std::vector<SparseRow> rows(stats.num_cells());
    return summarize(stats.num_states(), stats.num_choices(), stats.horizon(),
                     [&](int s, int o, int h) -> const SparseRow* {
                         const long n = stats.count(s, o, h);
                         if (n == 0) return nullptr;
                         auto& row = rows[stats.cell(s, o, h)];
                         if (row.empty()) {
                             for (const auto& [omega, m] : stats.outcome_counts(s, o, h))
                                 row.emplace_back(omega,
                                                  static_cast<Real>(m) / static_cast<Real>(n));
                         }
                         return &row;
                     });
}

void compute_regret(RunLog& log, Real v_star) {
    log.v_star = v_star;
    Real cum = 0.0;
    for (auto& rec : log.episodes) {
        require(std::isfinite(rec.v_policy), "compute_regret: missing policy evaluation");
        rec.regret_inc = v_star - rec.v_policy;
        cum += rec.regret_inc;
        rec.regret_cum = cum;
    }
}

Real theorem1_bound(Real S, Real O, Real K, Real d, Real t_bar, Real H) {
    return std::sqrt(S * O * K * d * d) * (t_bar + std::sqrt(S) * H);
}

Real corollary1_bound(Real S, Real O, Real K, Real tau_bar, Real H) {
    return (H / tau_bar) * std::sqrt(S * O * K) * (tau_bar + std::sqrt(S) * H);
}

Real theorem2_bound(Real K, Real H_o, Real S_o, Real A_o, Real O, Real H, Real S) {
    const Real phase1 = std::pow(K, 2.0 / 3.0) *
                        std::cbrt(std::pow(H_o, 5.0) * S_o * S_o * A_o * O);
    const Real phase2 = (H * H * S / H_o) * std::sqrt(O * K);
    return phase1 + phase2;
}

Real crossover_episodes(Real H, Real S, Real A, Real alpha, Real O) {
    require(alpha > 0.0 && alpha <= 1.0, "crossover_episodes: alpha must be in (0, 1]");
    return H * H * S * S * A / (std::pow(alpha, 16.0) * O * O);
}

Real bound_ratio(Real K, Real H, Real S, Real A, Real alpha, Real O) {
    require(alpha > 0.0 && alpha <= 1.0, "bound_ratio: alpha must be in (0, 1]");
    return std::pow(K, 1.0 / 6.0) * std::pow(alpha, 8.0 / 3.0) * std::cbrt(O) /
           (std::cbrt(H * S) * std::pow(A, 1.0 / 6.0));
}

Real renewal_bound(Real tau_min, Real tau_max, Real tau_expect_min, Real H, Real delta) {
    require(tau_min >= 1.0 && tau_min <= tau_expect_min && tau_expect_min <= tau_max,
            "renewal_bound: need 1 <= tau_min <= E[tau]_min <= tau_max");
    require(delta > 0.0 && delta < 1.0, "renewal_bound: delta must be in (0, 1)");
    const Real spread = tau_max - tau_min;
    const Real first =
        std::sqrt(32.0 * spread * H * (std::log(2.0) - std::log(delta)) /
                  std::pow(tau_expect_min, 3.0));
    return first + H / tau_expect_min;
}

PdlCheck verify_pdl(const FhSmdp& smdp_a, const FhSmdp& smdp_b, const HighLevelPolicy& policy) {
    require(smdp_a.num_states() == smdp_b.num_states() &&
                smdp_a.num_options() == smdp_b.num_options() &&
                smdp_a.horizon() == smdp_b.horizon(),
            "verify_pdl: models must share (S, O, H)");
    const int S = smdp_a.num_states();
    const int H = smdp_a.horizon();
    const auto layout = smdp_a.layout();
    const int start = smdp_b.start_state();

    const StageValueTable va = policy_value(smdp_a, policy);
    const StageValueTable vb = policy_value(smdp_b, policy);

    PdlCheck check;
    check.lhs = va.at(start, 1) - vb.at(start, 1);

    // Decision-epoch occupancy under model b and the policy, from (start, 1).
    Mat occupancy = Mat::Zero(S, H);
    occupancy(start, 0) = 1.0;
    Real rhs = 0.0;
    for (int h = 1; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            const Real w = occupancy(s, h - 1);
            if (w <= 0.0) continue;
            require(policy.defined(s, h), "verify_pdl: policy undefined at an occupied cell");
            const int o = policy.at(s, h);

            Real term = smdp_a.reward(s, o, h) - smdp_b.reward(s, o, h);
            // (p_a - p_b) . V_a over the union of supports
            const SparseRow& ra = smdp_a.kernel(s, o, h);
            const SparseRow& rb = smdp_b.kernel(s, o, h);
            std::size_t ia = 0, ib = 0;
            while (ia < ra.size() || ib < rb.size()) {
                int omega;
                Real pa = 0.0, pb = 0.0;
                if (ib >= rb.size() || (ia < ra.size() && ra[ia].first <= rb[ib].first)) {
                    omega = ra[ia].first;
                    pa = ra[ia].second;
                    ++ia;
                    if (ib < rb.size() && rb[ib].first == omega) {
                        pb = rb[ib].second;
                        ++ib;
                    }
                } else {
                    omega = rb[ib].first;
                    pb = rb[ib].second;
                    ++ib;
                }
                term += (pa - pb) * va.at(layout.next_state(omega), layout.next_stage(h, omega));
            }
            rhs += w * term;

            for (const auto& [omega, p] : rb) {
                const int hp = layout.next_stage(h, omega);
                if (hp < H) occupancy(layout.next_state(omega), hp - 1) += w * p;
            }
        }
    }
    check.rhs = rhs;
    return check;
}

Real bias_term(const FhMdp& mdp, const OptionSet& options) {
    const Real flat = flat_backward_induction(mdp).v.at(mdp.start_state(), 1);
    const FhSmdp smdp = flatten_to_smdp(mdp, options);
    const Real hier = exact_backward_induction(smdp).v.at(smdp.start_state(), 1);
    return flat - hier;
}

CoverageReport empirical_d_vs_bound(const RunLog& log, Real bound, Real delta) {
    CoverageReport report;
    report.bound = bound;
    if (log.episodes.empty()) return report;
    long ok = 0;
    for (const auto& rec : log.episodes)
        if (static_cast<Real>(rec.decisions) <= bound) ++ok;
    report.fraction = static_cast<Real>(ok) / static_cast<Real>(log.episodes.size());
    report.pass = report.fraction >= 1.0 - delta;
    return report;
}

BoundReport make_bound_report(Real S, Real O, Real K, Real d, Real t_bar, Real tau_bar, Real H,
                              Real S_o, Real A_o, Real H_o, Real A, Real alpha, Real delta,
                              Real tau_min, Real tau_max, Real tau_expect_min) {
    BoundReport r;
    r.S = S;
    r.O = O;
    r.K = K;
    r.d = d;
    r.t_bar = t_bar;
    r.tau_bar = tau_bar;
    r.H = H;
    r.S_o = S_o;
    r.A_o = A_o;
    r.H_o = H_o;
    r.A = A;
    r.alpha = alpha;
    r.delta = delta;
    r.tau_min = tau_min;
    r.tau_max = tau_max;
    r.tau_expect_min = tau_expect_min;
    r.theorem1_value = theorem1_bound(S, O, K, d, t_bar, H);
    r.corollary1_value = corollary1_bound(S, O, K, tau_bar, H);
    r.theorem2_value = theorem2_bound(K, H_o, S_o, A_o, O, H, S);
    r.ratio = bound_ratio(K, H, S, A, alpha, O);
    r.crossover_K = crossover_episodes(H, S, A, alpha, O);
    r.renewal_value = renewal_bound(tau_min, tau_max, tau_expect_min, H, delta);
    return r;
}

std::string BoundReport::text() const {
    std::ostringstream out;
    out << "regret shapes (unit constants, log factors dropped; shape, not certified constant)\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  inputs: S=%g O=%g K=%g d=%g t_bar=%g tau_bar=%g H=%g\n"
                  "          S_o=%g A_o=%g H_o=%g A=%g alpha=%g delta=%g\n"
                  "          tau_min=%g tau_max=%g E[tau]_min=%g\n",
                  S, O, K, d, t_bar, tau_bar, H, S_o, A_o, H_o, A, alpha, delta, tau_min,
                  tau_max, tau_expect_min);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "  option-dependent bound:    %.6g\n"
                  "  fixed-length bound:        %.6g\n"
                  "  two-phase bound:           %.6g\n"
                  "  bound ratio at K:          %.6g\n"
                  "  crossover episode count:   %.6g\n"
                  "  decisions-per-episode cap: %.6g\n",
                  theorem1_value, corollary1_value, theorem2_value, ratio, crossover_K,
                  renewal_value);
    out << buf;
    return out.str();
}

std::string BoundReport::csv() const {
    std::ostringstream out;
    out << "S,O,K,d,t_bar,tau_bar,H,S_o,A_o,H_o,A,alpha,delta,tau_min,tau_max,tau_expect_min,"
           "theorem1,corollary1,theorem2,ratio,crossover_K,renewal\n";
    const Real fields[] = {S,     O,     K,         d,
                           t_bar, tau_bar, H,       S_o,
                           A_o,   H_o,   A,         alpha,
                           delta, tau_min, tau_max, tau_expect_min,
                           theorem1_value, corollary1_value, theorem2_value,
                           ratio, crossover_K, renewal_value};
    char buf[40];
    for (std::size_t i = 0; i < std::size(fields); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", fields[i]);
        out << (i ? "," : "") << buf;
    }
    out << '\n';
    return out.str();
}

}  // namespace smdplab
