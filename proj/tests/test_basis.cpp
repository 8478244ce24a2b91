// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "spinent/spinent.hpp"

using namespace spinent;

TEST_CASE("bit helpers", "[basis]") {
    CHECK(popcount(0u) == 0);
    CHECK(popcount(0b1011u) == 3);
    CHECK(test_bit(0b100u, 2));
    CHECK_FALSE(test_bit(0b100u, 1));
    CHECK(low_bits(0) == 0u);
    CHECK(low_bits(3) == 0b111u);
    CHECK(low_bits(32) == 0xFFFFFFFFu);

    CHECK(extract_bits(0b101100u, 0b111000u) == 0b101u);
    CHECK(extract_bits(0b101100u, 0b000111u) == 0b100u);
    CHECK(extract_bits(0xFFFFFFFFu, 0x0F0F0F0Fu) == 0xFFFFu);
    CHECK(extract_bits(0u, 0xFFFFFFFFu) == 0u);

    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(12, 6) == 924);
    CHECK(binomial(32, 16) == 601080390ull);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(-1, 0) == 0);
}

TEST_CASE("sector_rank matches ascending enumeration order", "[basis]") {
    for (int n : {4, 7, 10}) {
        for (int k = 0; k <= n; ++k) {
            const SectorBasis basis(std::max(n, 2), k);
            for (std::size_t i = 0; i < basis.dimension(); ++i)
                REQUIRE(sector_rank(basis.state(i)) == i);
        }
    }
}

TEST_CASE("four-site half-filled sector is the exact ascending list", "[basis]") {
    const SectorBasis basis(4, 2);
    REQUIRE(basis.dimension() == 6);
    const std::vector<config_t> expected{0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100};
    CHECK(basis.states() == expected);
    CHECK(basis.site_count() == 4);
    CHECK(basis.up_count() == 2);
}

TEST_CASE("index_of round trips and rejects foreign configurations", "[basis]") {
    const SectorBasis basis(8, 3);
    REQUIRE(basis.dimension() == 56);
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
        const auto idx = basis.index_of(basis.state(k));
        REQUIRE(idx.has_value());
        CHECK(*idx == k);
        CHECK(basis.index_unchecked(basis.state(k)) == k);
    }
    CHECK_FALSE(basis.index_of(config_t{0b11u}).has_value());        // wrong popcount
    CHECK_FALSE(basis.index_of(config_t{0b100000111u}).has_value()); // bit beyond site 7
    CHECK_FALSE(basis.index_of(config_t{0}).has_value());

    SpinConfiguration good{0b111u, 8};
    CHECK(basis.index_of(good).value() == 0);
    SpinConfiguration wrong_size{0b111u, 6};
    CHECK_THROWS_AS(basis.index_of(wrong_size), ParameterError);
}

TEST_CASE("sectors partition the full space", "[basis]") {
    const int n = 8;
    std::set<config_t> seen;
    std::size_t total = 0;
    for (int k = 0; k <= n; ++k) {
        const auto basis = enumerate_sector(n, k);
        REQUIRE(basis.dimension() == binomial(n, k));
        REQUIRE(std::is_sorted(basis.states().begin(), basis.states().end()));
        for (config_t c : basis.states()) {
            REQUIRE(popcount(c) == k);
            seen.insert(c);
        }
        total += basis.dimension();
    }
    CHECK(total == (std::size_t{1} << n));
    CHECK(seen.size() == (std::size_t{1} << n));
}

TEST_CASE("empty and full sectors hold the single expected state", "[basis]") {
    CHECK(SectorBasis(6, 0).states() == std::vector<config_t>{0});
    CHECK(SectorBasis(6, 6).states() == std::vector<config_t>{0b111111});
}

TEST_CASE("basis constructor validates its arguments", "[basis]") {
    CHECK_THROWS_AS(SectorBasis(1, 0), ParameterError);
    CHECK_THROWS_AS(SectorBasis(33, 2), ParameterError);
    CHECK_THROWS_AS(SectorBasis(4, -1), ParameterError);
    CHECK_THROWS_AS(SectorBasis(4, 5), ParameterError);
}

TEST_CASE("bipartition mask accessors and validation", "[basis]") {
    const BipartitionMask m(0b0101u, 4);
    CHECK(m.kept_count() == 2);
    CHECK(m.traced_count() == 2);
    CHECK(m.traced_mask() == 0b1010u);
    CHECK(m.complement().kept_mask == 0b1010u);
    CHECK(m.complement().complement().kept_mask == m.kept_mask);

    CHECK_THROWS_AS(BipartitionMask(0b1, 1), ParameterError);
    CHECK_THROWS_AS(BipartitionMask(0b10000, 4), ParameterError); // bit beyond sites
    CHECK_THROWS_AS(BipartitionMask(0, 4), ParameterError);       // empty kept part
    CHECK_THROWS_AS(BipartitionMask(0b1111, 4), ParameterError);  // empty traced part
}

TEST_CASE("standard bipartitions produce the documented masks", "[basis]") {
    CHECK(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::odd_even()).kept_mask ==
          0b010101u);
    CHECK(standard_bipartition(ModelKind::dimer, 8, BipartitionScheme::odd_even()).kept_mask ==
          0b01010101u);
    // Ladder with 4 rungs: sites leg*4 + rung, keep (leg + rung) even.
    CHECK(standard_bipartition(ModelKind::ladder, 8, BipartitionScheme::checkerboard()).kept_mask ==
          0xA5u);
    CHECK(standard_bipartition(ModelKind::ladder, 8, BipartitionScheme::leg()).kept_mask == 0x0Fu);
    CHECK(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::block(3)).kept_mask ==
          0b000111u);
    CHECK(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::custom(0b011010u)).kept_mask ==
          0b011010u);

    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::checkerboard()),
                    ParameterError);
    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::leg()),
                    ParameterError);
    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::block(0)),
                    ParameterError);
    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 6, BipartitionScheme::block(6)),
                    ParameterError);
    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 4, BipartitionScheme::custom(0)),
                    ParameterError);
    CHECK_THROWS_AS(standard_bipartition(ModelKind::chain, 4, BipartitionScheme::custom(0xF)),
                    ParameterError);
}

TEST_CASE("checkerboard cut crosses every ladder bond", "[basis]") {
    // Every leg bond and every rung bond must connect a kept site to a traced
    // site; that is what makes the checkerboard entropy extensive in rungs.
    for (int rungs : {4, 6, 8}) {
        const auto model = build_ladder(rungs, 1.0, 0.7, 0.5);
        const auto mask =
            standard_bipartition(ModelKind::ladder, 2 * rungs, BipartitionScheme::checkerboard());
        int crossing = 0;
        for (const auto& bond : model.bonds) {
            const bool a_kept = test_bit(mask.kept_mask, bond.site_a);
            const bool b_kept = test_bit(mask.kept_mask, bond.site_b);
            if (a_kept != b_kept) ++crossing;
        }
        CHECK(crossing == static_cast<int>(model.bonds.size()));
    }
}
