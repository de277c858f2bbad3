#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wse {

/// Independent generator for stream `index` of a run seeded with `seed`.
/// Work items (k-means restarts, Monte Carlo trials) each draw from their
/// own stream, so results do not depend on scheduling order.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index,
                                 std::uint64_t tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(tag)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
inline double uniform01_open_low(std::mt19937_64& gen) {
    return 1.0 - uniform01(gen);
}

/// Exponential variate with the given mean.
inline double exponential(std::mt19937_64& gen, double mean) {
    return -mean * std::log(uniform01_open_low(gen));
}

/// Uniform integer in [0, n).
inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    return static_cast<std::size_t>(uniform01(gen) * static_cast<double>(n)) % n;
}

}  // namespace wse
