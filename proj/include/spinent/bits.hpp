// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>

namespace spinent {

/// One spin-1/2 basis configuration: bit i holds the spin at site i (1 = up).
using config_t = std::uint32_t;

inline constexpr int kMaxSites = 32;

[[nodiscard]] constexpr int popcount(config_t x) noexcept {
    return std::popcount(x);
}

[[nodiscard]] constexpr bool test_bit(config_t x, int pos) noexcept {
    return (x >> pos) & 1u;
}

/// Mask with the n lowest bits set; n in [0, 32].
[[nodiscard]] constexpr config_t low_bits(int n) noexcept {
    if (n <= 0) return 0;
    if (n >= 32) return ~config_t{0};
    return (config_t{1} << n) - 1;
}

/// Compacts the bits of `x` selected by `mask` into positions 0.. in ascending
/// site order (software PEXT).
[[nodiscard]] constexpr config_t extract_bits(config_t x, config_t mask) noexcept {
    config_t out = 0;
    int k = 0;
    while (mask) {
        const int p = std::countr_zero(mask);
        out |= ((x >> p) & 1u) << k;
        ++k;
        mask &= mask - 1;
    }
    return out;
}

/// Binomial coefficients up to C(32, k), exact in 64 bits.
[[nodiscard]] inline std::uint64_t binomial(int n, int k) noexcept {
    struct Table {
        std::uint64_t c[kMaxSites + 1][kMaxSites + 1] = {};
        Table() {
            for (int i = 0; i <= kMaxSites; ++i) {
                c[i][0] = 1;
                for (int j = 1; j <= i; ++j)
                    c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0);
            }
        }
    };
    static const Table t;
    if (k < 0 || n < 0 || k > n || n > kMaxSites) return 0;
    return t.c[n][k];
}

/// Position of `x` in the ascending enumeration of all words with the same
/// popcount (combinadic rank): sum of C(p_j, j) over the j-th lowest set bit
/// at position p_j, j = 1..popcount.
[[nodiscard]] inline std::uint64_t sector_rank(config_t x) noexcept {
    std::uint64_t r = 0;
    int j = 1;
    while (x) {
        r += binomial(std::countr_zero(x), j++);
        x &= x - 1;
    }
    return r;
}

} // namespace spinent
