#pragma once

// All randomness in the library flows from a 64-bit seed through std::mt19937_64,
// whose output sequence is fixed by the C++ standard. Distribution transforms are
// written out here rather than taken from <random> because the standard leaves
// the algorithms behind std::*_distribution implementation-defined.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fracturb {

/// One SplitMix64 round; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for an independent substream, e.g. one per particle or per time step.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    splitmix64(s);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Unit-mean exponential.
    double exponential() { return -std::log(uniform()); }

    /// Standard normal (Box-Muller, one value per call).
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace fracturb
