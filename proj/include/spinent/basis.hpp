// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinent/bits.hpp"
#include "spinent/errors.hpp"

namespace spinent {

/// A basis configuration together with the lattice size it belongs to.
struct SpinConfiguration {
    config_t bits = 0;
    int site_count = 0;

    [[nodiscard]] bool is_valid() const noexcept {
        return site_count >= 2 && site_count <= kMaxSites &&
               (bits & ~low_bits(site_count)) == 0;
    }
};

/// Ascending enumeration of all configurations of `site_count` spins with a
/// fixed number of up spins (one Sz sector). Immutable after construction.
class SectorBasis {
public:
    SectorBasis(int site_count, int up_count)
        : site_count_(site_count), up_count_(up_count) {
        if (site_count < 2 || site_count > kMaxSites)
            throw ParameterError("SectorBasis: site count must be in [2, 32], got " +
                                 std::to_string(site_count));
        if (up_count < 0 || up_count > site_count)
            throw ParameterError("SectorBasis: up count must be in [0, N], got " +
                                 std::to_string(up_count));
        states_.reserve(binomial(site_count, up_count));
        if (up_count == 0) {
            states_.push_back(0);
        } else {
            // Gosper's hack walks fixed-popcount words in ascending order.
            const std::uint64_t last = static_cast<std::uint64_t>(low_bits(up_count))
                                       << (site_count - up_count);
            std::uint64_t c = low_bits(up_count);
            for (;;) {
                states_.push_back(static_cast<config_t>(c));
                if (c == last) break;
                const std::uint64_t t = c | (c - 1);
                c = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(c) + 1));
            }
        }
    }

    [[nodiscard]] int site_count() const noexcept { return site_count_; }
    [[nodiscard]] int up_count() const noexcept { return up_count_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return states_.size(); }
    [[nodiscard]] config_t state(std::size_t k) const noexcept { return states_[k]; }
    [[nodiscard]] const std::vector<config_t>& states() const noexcept { return states_; }

    /// Index of `config` in the ascending enumeration, or absent when the
    /// popcount does not match this sector.
    [[nodiscard]] std::optional<std::size_t> index_of(config_t config) const noexcept {
        if (popcount(config) != up_count_ || (config & ~low_bits(site_count_)) != 0)
            return std::nullopt;
        return static_cast<std::size_t>(sector_rank(config));
    }

    [[nodiscard]] std::optional<std::size_t> index_of(const SpinConfiguration& config) const {
        if (config.site_count != site_count_)
            throw ParameterError("index_of: configuration is for " +
                                 std::to_string(config.site_count) + " sites, basis has " +
                                 std::to_string(site_count_));
        return index_of(config.bits);
    }

    /// Rank lookup without the validity checks; config must belong to the sector.
    [[nodiscard]] std::size_t index_unchecked(config_t config) const noexcept {
        return static_cast<std::size_t>(sector_rank(config));
    }

private:
    int site_count_;
    int up_count_;
    std::vector<config_t> states_;
};

[[nodiscard]] inline SectorBasis enumerate_sector(int site_count, int up_count) {
    return SectorBasis(site_count, up_count);
}

/// Kept/traced split of the lattice. `kept_mask` selects the kept sublattice.
struct BipartitionMask {
    config_t kept_mask = 0;
    int site_count = 0;

    BipartitionMask() = default;
    BipartitionMask(config_t kept, int sites) : kept_mask(kept), site_count(sites) {
        if (sites < 2 || sites > kMaxSites)
            throw ParameterError("BipartitionMask: site count must be in [2, 32]");
        if ((kept & ~low_bits(sites)) != 0)
            throw ParameterError("BipartitionMask: mask has bits beyond site count");
        const int k = popcount(kept);
        if (k < 1 || k > sites - 1)
            throw ParameterError("BipartitionMask: both sublattices must be non-empty");
    }

    [[nodiscard]] int kept_count() const noexcept { return popcount(kept_mask); }
    [[nodiscard]] int traced_count() const noexcept { return site_count - kept_count(); }
    [[nodiscard]] config_t traced_mask() const noexcept {
        return ~kept_mask & low_bits(site_count);
    }
    [[nodiscard]] BipartitionMask complement() const {
        return BipartitionMask(traced_mask(), site_count);
    }
};

enum class ModelKind { chain, dimer, ladder };

/// How to pick the kept sublattice for a given model geometry.
struct BipartitionScheme {
    enum class Kind { odd_even, checkerboard, leg, block, custom } kind = Kind::odd_even;
    int block_length = 0;
    config_t custom_mask = 0;

    static BipartitionScheme odd_even() { return {Kind::odd_even, 0, 0}; }
    static BipartitionScheme checkerboard() { return {Kind::checkerboard, 0, 0}; }
    static BipartitionScheme leg() { return {Kind::leg, 0, 0}; }
    static BipartitionScheme block(int length) { return {Kind::block, length, 0}; }
    static BipartitionScheme custom(config_t mask) { return {Kind::custom, 0, mask}; }
};

/// Builds the kept-sublattice mask. Chain sites are numbered 0..N-1 around the
/// ring; ladder sites are leg * n_rungs + rung. odd_even keeps sites {0,2,...};
/// checkerboard keeps ladder sites of even (leg + rung) parity, which puts every
/// leg and rung bond across the cut.
[[nodiscard]] inline BipartitionMask standard_bipartition(ModelKind model_kind, int total_sites,
                                                          const BipartitionScheme& scheme) {
    using Kind = BipartitionScheme::Kind;
    switch (scheme.kind) {
        case Kind::odd_even: {
            config_t mask = 0;
            for (int i = 0; i < total_sites; i += 2) mask |= config_t{1} << i;
            return BipartitionMask(mask, total_sites);
        }
        case Kind::checkerboard: {
            if (model_kind != ModelKind::ladder || total_sites % 2 != 0)
                throw ParameterError("checkerboard bipartition requires a ladder");
            const int rungs = total_sites / 2;
            config_t mask = 0;
            for (int leg = 0; leg < 2; ++leg)
                for (int rung = 0; rung < rungs; ++rung)
                    if ((leg + rung) % 2 == 0) mask |= config_t{1} << (leg * rungs + rung);
            return BipartitionMask(mask, total_sites);
        }
        case Kind::leg: {
            if (model_kind != ModelKind::ladder || total_sites % 2 != 0)
                throw ParameterError("leg bipartition requires a ladder");
            return BipartitionMask(low_bits(total_sites / 2), total_sites);
        }
        case Kind::block: {
            if (scheme.block_length < 1 || scheme.block_length > total_sites - 1)
                throw ParameterError("block bipartition length must be in [1, N-1]");
            return BipartitionMask(low_bits(scheme.block_length), total_sites);
        }
        case Kind::custom: {
            const config_t full = low_bits(total_sites);
            if ((scheme.custom_mask & full) == 0 || (scheme.custom_mask & full) == full)
                throw ParameterError("custom bipartition mask must keep and trace at least one site");
            return BipartitionMask(scheme.custom_mask & full, total_sites);
        }
    }
    throw ParameterError("unknown bipartition scheme");
}

} // namespace spinent
