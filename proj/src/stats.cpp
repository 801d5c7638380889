#include "smdplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace smdplab {

SufficientStats::SufficientStats(int num_states, int num_choices, int horizon)
    : num_states_(num_states), num_choices_(num_choices), horizon_(horizon) {
    require(num_states >= 1 && num_choices >= 1 && horizon >= 2,
            "SufficientStats requires S >= 1, choices >= 1, H >= 2");
    n_.assign(num_cells(), 0);
    reward_sum_.assign(num_cells(), 0.0);
    reward_m2_.assign(num_cells(), 0.0);
    counts_.assign(num_cells(), {});
}

void SufficientStats::record(int s, int c, int h, int omega, Real reward) {
    require(h >= 1 && h < horizon_, "record: stage must satisfy 1 <= h < H");
    const int i = cell(s, c, h);
    const long n_new = ++n_[i];
    const Real sum_new = reward_sum_[i] + reward;
    if (n_new >= 2) {
        const Real mean_prev = reward_sum_[i] / static_cast<Real>(n_new - 1);
        const Real mean_new = sum_new / static_cast<Real>(n_new);
        reward_m2_[i] += (reward - mean_prev) * (reward - mean_new);
    }
    reward_sum_[i] = sum_new;

    auto& row = counts_[i];
    auto it = std::lower_bound(row.begin(), row.end(), omega,
                               [](const auto& e, int key) { return e.first < key; });
    if (it != row.end() && it->first == omega)
        it->second += 1;
    else
        row.insert(it, {omega, 1});
}

void update(SufficientStats& stats, const JointOutcomeLayout& layout, int s, int o, int h,
            int s_next, int h_next, Real reward) {
    require(h_next > h, "update: landing stage must exceed the decision stage");
    require(h_next <= layout.horizon, "update: landing stage beyond the horizon");
    stats.record(s, o, h, layout.index(h, s_next, h_next), reward);
}

Vec empirical_row(const SufficientStats& stats, int s, int c, int h, int outcome_space) {
    Vec row = Vec::Zero(outcome_space);
    const long n = stats.count(s, c, h);
    if (n == 0) {
        row.setConstant(1.0 / static_cast<Real>(outcome_space));
        return row;
    }
    for (const auto& [omega, m] : stats.outcome_counts(s, c, h))
        row(omega) = static_cast<Real>(m) / static_cast<Real>(n);
    return row;
}

Real reward_bonus(const SufficientStats& stats, int s, int c, int h, Real delta_prime) {
    require(delta_prime > 0.0 && delta_prime < 1.0, "reward_bonus: delta' must be in (0, 1)");
    const long n = stats.count(s, c, h);
    if (n <= 1) return static_cast<Real>(stats.horizon() - h + 1);
    const Real log_term = std::log(2.0 / delta_prime);
    const Real var = stats.reward_variance(s, c, h);
    return std::sqrt(2.0 * var * log_term / static_cast<Real>(n)) +
           7.0 * log_term / (3.0 * static_cast<Real>(n - 1));
}

Real transition_bonus(const SufficientStats& stats, int s, int c, int h, Real delta_prime,
                      int support_size) {
    require(delta_prime > 0.0 && delta_prime < 1.0,
            "transition_bonus: delta' must be in (0, 1)");
    const long n = std::max<long>(stats.count(s, c, h), 1);
    const Real radius =
        std::sqrt(2.0 *
                  (static_cast<Real>(support_size) * std::log(2.0) +
                   std::log(static_cast<Real>(n) / delta_prime)) /
                  static_cast<Real>(n));
    return std::min(radius, 2.0);
}

Real split_confidence(Real delta, int S, int O, int H, int K) {
    require(delta > 0.0 && delta < 1.0, "split_confidence: delta must be in (0, 1)");
    return delta / (2.0 * static_cast<Real>(S) * static_cast<Real>(O) * static_cast<Real>(H) *
                    static_cast<Real>(K));
}

ConfidenceModel build_confidence(const SufficientStats& stats, Real delta_prime,
                                 int support_size, std::vector<std::uint8_t> admissible,
                                 bool joint) {
    ConfidenceModel model;
    model.num_states = stats.num_states();
    model.num_choices = stats.num_choices();
    model.horizon = stats.horizon();
    model.joint = joint;
    model.delta_prime = delta_prime;
    const int cells = stats.num_cells();
    require(admissible.empty() || static_cast<int>(admissible.size()) == cells,
            "build_confidence: admissibility mask has wrong size");
    model.admissible = admissible.empty() ? std::vector<std::uint8_t>(cells, 1)
                                          : std::move(admissible);
    model.r_hat.resize(cells);
    model.beta_r.resize(cells);
    model.beta_p.resize(cells);
    model.n.resize(cells);
    model.p_hat.resize(cells);
    for (int h = 1; h < stats.horizon(); ++h) {
        for (int c = 0; c < stats.num_choices(); ++c) {
            for (int s = 0; s < stats.num_states(); ++s) {
                const int i = stats.cell(s, c, h);
                const long n = stats.count(s, c, h);
                model.n[i] = n;
                model.r_hat[i] = stats.reward_mean(s, c, h);
                model.beta_r[i] = reward_bonus(stats, s, c, h, delta_prime);
                model.beta_p[i] = transition_bonus(stats, s, c, h, delta_prime, support_size);
                if (n > 0) {
                    SparseRow row;
                    row.reserve(stats.outcome_counts(s, c, h).size());
                    for (const auto& [omega, m] : stats.outcome_counts(s, c, h))
                        row.emplace_back(omega, static_cast<Real>(m) / static_cast<Real>(n));
                    model.p_hat[i] = std::move(row);
                }
            }
        }
    }
    return model;
}

void SufficientStats::save(std::ostream& out) const {
    out << "smdplab-stats 1\n";
    out << num_states_ << ' ' << num_choices_ << ' ' << horizon_ << '\n';
    char buf[64];
    for (int i = 0; i < num_cells(); ++i) {
        if (n_[i] == 0) continue;
        std::snprintf(buf, sizeof(buf), "%.17g %.17g", reward_sum_[i], reward_m2_[i]);
        out << "cell " << i << ' ' << n_[i] << ' ' << buf;
        for (const auto& [omega, m] : counts_[i]) out << ' ' << omega << ' ' << m;
        out << '\n';
    }
    out << "end\n";
}

SufficientStats SufficientStats::load(std::istream& in) {
    std::string tag;
    int version = 0;
    in >> tag >> version;
    require(tag == "smdplab-stats" && version == 1, "stats snapshot: unknown header");
    int S = 0, C = 0, H = 0;
    in >> S >> C >> H;
    SufficientStats stats(S, C, H);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line == "end") break;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string kind;
        row >> kind;
        require(kind == "cell", "stats snapshot: malformed record");
        int i = 0;
        long n = 0;
        Real sum = 0.0, m2 = 0.0;
        row >> i >> n >> sum >> m2;
        require(i >= 0 && i < stats.num_cells(), "stats snapshot: cell index out of range");
        stats.n_[i] = n;
        stats.reward_sum_[i] = sum;
        stats.reward_m2_[i] = m2;
        int omega = 0;
        long m = 0;
        while (row >> omega >> m) stats.counts_[i].emplace_back(omega, m);
    }
    return stats;
}

}  // namespace smdplab
