#pragma once

#include <array>
#include <cstdint>

namespace forage {

/// splitmix64 finalizer; used for seed expansion and run-seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed for the run at (point_index, run_index) of a sweep. Pure mixing of the
/// three inputs, so adding sweep points or runs never perturbs existing streams.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed,
                                        std::uint64_t point_index,
                                        std::uint64_t run_index) {
    std::uint64_t h = mix64(master_seed ^ 0x466f72616765u);
    h = mix64(h ^ mix64(point_index));
    h = mix64(h ^ mix64(run_index));
    return h;
}

/// Deterministic pseudo-random stream (xoshiro256**). Same seed and call
/// sequence gives the same outputs on every platform: the generator itself is
/// fixed-width integer arithmetic only.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        // Standard splitmix64 state expansion.
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi). Consumes exactly one draw, even when lo == hi.
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Poisson-distributed count (Knuth's product method). mean <= 0 draws
    /// nothing and returns 0.
    int poisson(double mean);

private:
    static constexpr std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace forage
