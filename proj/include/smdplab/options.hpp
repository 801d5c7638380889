#pragma once

#include "smdplab/fhmdp.hpp"
#include "smdplab/types.hpp"

#include <string>
#include <vector>

namespace smdplab {

/// Temporally extended action: initiation set, termination probabilities and
/// an internal deterministic policy, all over (state, stage) pairs.
struct OptionSpec {
    std::string id;
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> initiation;  // S x H
    Mat termination;                                                // S x H, in [0,1]
    IntMat internal_policy;                                         // S x H, -1 = undefined

    OptionSpec() = default;
    OptionSpec(std::string name, int num_states, int horizon)
        : id(std::move(name)),
          initiation(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
              num_states, horizon, false)),
          termination(Mat::Zero(num_states, horizon)),
          internal_policy(IntMat::Constant(num_states, horizon, -1)) {}

    bool initiable(int s, int h) const { return initiation(s, h - 1); }
    void set_initiable(int s, int h, bool v = true) { initiation(s, h - 1) = v; }
    Real beta(int s, int h) const { return termination(s, h - 1); }
    void set_beta(int s, int h, Real b) { termination(s, h - 1) = b; }
    int action(int s, int h) const { return internal_policy(s, h - 1); }
    void set_action(int s, int h, int a) { internal_policy(s, h - 1) = a; }
};

struct OptionSet {
    std::vector<OptionSpec> options;

    int size() const { return static_cast<int>(options.size()); }
    const OptionSpec& operator[](int i) const { return options[i]; }
    OptionSpec& operator[](int i) { return options[i]; }

    /// Indices of options initiable at (s, h), in id order.
    std::vector<int> initiable_at(int s, int h) const {
        std::vector<int> out;
        for (int o = 0; o < size(); ++o)
            if (options[o].initiable(s, h)) out.push_back(o);
        return out;
    }
};

/// Checks boundary termination, admissibility of termination states, policy
/// definedness on reachable cells and probability ranges.
ValidationReport validate_option_set(const OptionSet& options, const FhMdp& model);

/// One single-step option per primitive action: initiable everywhere,
/// terminates after every step, internal policy plays that action.
OptionSet make_primitive_options(const FhMdp& model);

}  // namespace smdplab
