#pragma once

#include "smdplab/types.hpp"

#include <cstdint>
#include <random>

namespace smdplab {

/// Seeded pseudo-random stream. The generator is std::mt19937_64 with all
/// variate conversions done by hand so that identical seeds yield identical
/// streams on every platform; std::uniform_*_distribution is never used.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform double in [0, 1), 53 random bits.
    Real uniform() {
        return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Modulo reduction; the bias is below 1e-15
    /// for the small n used here and keeps the stream platform-stable.
    int uniform_int(int n) {
        return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
    }

    bool bernoulli(Real p) { return uniform() < p; }

    /// Sample an index from a dense probability row (inverse CDF walk).
    int categorical(const Vec& probs) {
        const Real u = uniform();
        Real cum = 0.0;
        int last = 0;
        for (int i = 0; i < probs.size(); ++i) {
            if (probs(i) <= 0.0) continue;
            cum += probs(i);
            last = i;
            if (u < cum) return i;
        }
        return last;  // guard against rounding in the final bucket
    }

    /// Sample an outcome index from a sparse row.
    int categorical(const SparseRow& row) {
        const Real u = uniform();
        Real cum = 0.0;
        int last = row.empty() ? 0 : row.back().first;
        for (const auto& [idx, p] : row) {
            cum += p;
            last = idx;
            if (u < cum) return idx;
        }
        return last;
    }

    /// Deterministically derive an independent stream for a sub-task.
    Rng derive(std::uint64_t salt) const {
        return Rng(mix(seed_, salt));
    }

    /// splitmix64 finalizer over (seed, salt).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace smdplab
