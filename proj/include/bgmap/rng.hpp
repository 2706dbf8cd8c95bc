#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace bgmap {

namespace detail {

/// splitmix64 finalizer; stateless bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace detail

/// Deterministic xoshiro256++ generator. All randomness in the library flows
/// through this type so results are reproducible bit-for-bit from a seed,
/// independent of platform RNG/distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s += 0x9E3779B97F4A7C15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller draw. Consumes exactly two uniforms per call so the stream
    /// position is a pure function of the number of calls.
    double gaussian(double mean, double stddev) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.28318530717958647692;
        return mean + stddev * radius * std::cos(two_pi * u2);
    }

    /// Unbiased integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_;
};

/// Labeled sub-stream seed. Streams for "support", "signal", "matrix", ... are
/// decorrelated by hashing the label, so generation is independent of the
/// order in which the sub-streams are consumed.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::string_view label,
                                        std::uint64_t index = 0) {
    const std::uint64_t h = detail::fnv1a64(label);
    return detail::mix64(detail::mix64(master ^ h) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

} // namespace bgmap
