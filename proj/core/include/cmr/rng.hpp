#ifndef CMR_RNG_HPP
#define CMR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

#include "cmr/types.hpp"

namespace cmr {

/// Deterministic random stream (xoshiro256** seeded through splitmix64).
///
/// The standard-library engines are avoided on purpose: distribution
/// algorithms differ between standard libraries, and the Monte-Carlo harness
/// requires bit-identical draws for a given seed no matter how trials are
/// scheduled. Streams for independent trials are derived from a root seed and
/// a counter path, never by sharing one engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    /// Derives an independent stream from a root seed and a path of counters
    /// (trial index, SNR index, purpose tag, ...). Same path, same stream.
    static Rng derive(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
        std::uint64_t x = root;
        for (std::uint64_t p : path) {
            x ^= splitmix64(p + 0x9e3779b97f4a7c15ull);
            x = splitmix64(x);
        }
        return Rng(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; draws two uniforms per call.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Complex sample with independent N(0,1) real and imaginary parts.
    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static std::uint64_t splitmix64(std::uint64_t&& x) {
        std::uint64_t v = x;
        return splitmix64(v);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace cmr

#endif
