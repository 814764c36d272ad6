#pragma once

#include <cmath>
#include <cstdint>

namespace thermocc {

// Counter-based deterministic randomness. Every draw is a pure function of
// (seed, index, stream), so parallel loops and serial loops produce the same
// values and a run is reproducible from its single 64-bit seed.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) {
    const std::uint64_t z = splitmix64(seed ^ splitmix64(index * 2u + 1u) ^ splitmix64(stream * 0x9E3779B97F4A7C15ULL));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Standard normal deviate, Box-Muller on two counter-based uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) {
    const double u1 = uniform01(seed, index, stream * 2u + 1u);
    const double u2 = uniform01(seed, index, stream * 2u + 2u);
    // 1-u1 is in (0, 1], keeps the log finite.
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace thermocc
