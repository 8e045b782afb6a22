#pragma once

#include <cstdint>
#include <random>

namespace qws {

/// SplitMix64 step, used to launder user seeds into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Independent deterministic stream: one root seed, one engine per stream
/// index. mt19937_64 output is pinned by the standard, so sequences are
/// identical across platforms.
inline std::mt19937_64 seeded_engine(std::uint64_t root_seed, std::uint64_t stream) {
    std::uint64_t s = root_seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
    return std::mt19937_64(splitmix64(s));
}

/// Unbiased uniform draw from [0, n) by rejection. Hand-rolled because
/// std::uniform_int_distribution is implementation-defined and would break
/// reproducibility across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
        x = eng();
    } while (x > limit);
    return x % n;
}

inline bool random_bit(std::mt19937_64& eng) { return (eng() >> 63) != 0; }

} // namespace qws
