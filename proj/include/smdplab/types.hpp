#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace smdplab {

using Real = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntMat = Eigen::MatrixXi;

/// Sparse categorical row: (outcome index, probability), sorted by index.
using SparseRow = std::vector<std::pair<int, Real>>;

/// List of invariant violations; empty means valid.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void add(std::string msg) { violations.push_back(std::move(msg)); }
    std::string joined() const {
        std::string out;
        for (const auto& v : violations) {
            out += v;
            out += '\n';
        }
        return out;
    }
};

/// Value table over states and stages h in [1, H]; column H is identically zero.
struct StageValueTable {
    Mat values;  // S x H, column (h-1) holds stage h

    StageValueTable() = default;
    StageValueTable(int num_states, int horizon) : values(Mat::Zero(num_states, horizon)) {}

    Real at(int s, int h) const { return values(s, h - 1); }
    Real& at(int s, int h) { return values(s, h - 1); }
    int num_states() const { return static_cast<int>(values.rows()); }
    int horizon() const { return static_cast<int>(values.cols()); }
};

/// Deterministic choice per (state, stage); -1 marks "undefined".
struct HighLevelPolicy {
    IntMat choice;  // S x H

    HighLevelPolicy() = default;
    HighLevelPolicy(int num_states, int horizon)
        : choice(IntMat::Constant(num_states, horizon, -1)) {}

    int at(int s, int h) const { return choice(s, h - 1); }
    void set(int s, int h, int c) { choice(s, h - 1) = c; }
    bool defined(int s, int h) const { return choice(s, h - 1) >= 0; }
};

/// Joint outcome indexing for decisions taken at stage h: an outcome is a
/// (next state s', landing stage h') pair with h' in (h, H], flattened as
/// omega = (h' - h - 1) * S + s'. Indices are local to the decision stage.
struct JointOutcomeLayout {
    int num_states = 0;
    int horizon = 0;

    int size(int h) const { return num_states * (horizon - h); }
    int index(int h, int s_next, int h_next) const {
        return (h_next - h - 1) * num_states + s_next;
    }
    int next_state(int omega) const { return omega % num_states; }
    int next_stage(int h, int omega) const { return h + 1 + omega / num_states; }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace smdplab
