#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams (Philox4x32-10, Salmon et al. 2011).
// Every draw is a pure function of (key, counter), so matrix entries and
// Monte Carlo trials can be generated in any order, on any number of
// threads, with identical results.

namespace ssv::rng {

struct Block {
    std::uint32_t w[4];
};

inline Block philox4x32(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
                        std::uint32_t c2, std::uint32_t c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x0;
        std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x2;
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        x0 = hi1 ^ x1 ^ k0;
        x1 = lo1;
        x2 = hi0 ^ x3 ^ k1;
        x3 = lo0;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return Block{{x0, x1, x2, x3}};
}

/// SplitMix64 finalizer; derives sub-stream keys, e.g. per-trial seeds.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t to_u64(std::uint32_t hi, std::uint32_t lo) {
    return (std::uint64_t{hi} << 32) | lo;
}

/// Uniform on [0,1) from 53 random bits.
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform on (0,1]; safe as a log argument.
inline double u01_open(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// One block per matrix entry: key = seed, counter = (draw, 0, column, row).
inline Block entry_block(std::uint64_t seed, std::uint32_t row, std::uint32_t col,
                         std::uint32_t draw = 0) {
    return philox4x32(seed, draw, 0u, col, row);
}

/// Standard normal via Box-Muller on one block (uses both words, returns z0).
inline double entry_normal(std::uint64_t seed, std::uint32_t row, std::uint32_t col) {
    Block b = entry_block(seed, row, col);
    double u1 = u01_open(to_u64(b.w[0], b.w[1]));
    double u2 = u01(to_u64(b.w[2], b.w[3]));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double entry_uniform01(std::uint64_t seed, std::uint32_t row, std::uint32_t col) {
    Block b = entry_block(seed, row, col);
    return u01(to_u64(b.w[0], b.w[1]));
}

/// Unbiased sign bit.
inline int entry_sign(std::uint64_t seed, std::uint32_t row, std::uint32_t col) {
    Block b = entry_block(seed, row, col);
    return (b.w[0] & 1u) ? 1 : -1;
}

} // namespace ssv::rng
