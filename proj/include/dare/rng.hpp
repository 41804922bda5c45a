#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dare/error.hpp"

namespace dare {

// Deterministic random source. The mt19937_64 engine is bit-exact across
// platforms by the standard; the distributions here are hand-rolled because
// std::uniform_int_distribution and friends are not portable. Every consumer
// of randomness in the library goes through this class so that a seed fully
// determines the output on any machine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive. Uses rejection sampling so the
    // result is exactly uniform.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw ConfigError("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(gen_());  // full range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return lo + static_cast<std::int64_t>(v % span);
    }

    // Standard normal via Box-Muller. No caching of the second value, so the
    // draw count per call is fixed and streams stay reproducible.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Fisher-Yates shuffle using uniform_int; std::shuffle is not portable.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// Mixes a base seed with stream identifiers, so that per-item generators are
// decorrelated but fully determined by (seed, ids...). splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) {
    return mix_seed(seed ^ mix_seed(a));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a) ^ mix_seed(b + 0x6a09e667f3bcc909ULL));
}

}  // namespace dare
