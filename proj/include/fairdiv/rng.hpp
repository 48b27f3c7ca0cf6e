#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fairdiv {

/// SplitMix64 step; the mixer behind per-trial stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic stream seed from (experiment seed, salt a, salt b), so that
/// parallel trials draw from hash-separated streams and execution order never
/// matters. Identical inputs give identical streams everywhere.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a + 0x9e3779b97f4a7c15ull);
    h = splitmix64(s);
    s = h ^ (b + 0xbf58476d1ce4e5b9ull);
    return splitmix64(s);
}

/// The project-wide generator: mt19937_64 (bit-exact per the C++ standard)
/// with explicit inverse-transform draws. Every sampler consumes exactly one
/// engine value per variate, which keeps streams replayable.
class Rng {
public:
    explicit Rng(std::uint64_t stream_seed) : eng_(stream_seed) {}

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Exponential rate 1 via inverse transform, never -inf.
    double exponential() { return -std::log1p(-uniform01()); }

    /// Uniform on (-eps, eps) (mean zero; the H2 default noise).
    double uniform_sym(double eps) { return eps * (2.0 * uniform01() - 1.0); }

private:
    std::mt19937_64 eng_;
};

}  // namespace fairdiv
