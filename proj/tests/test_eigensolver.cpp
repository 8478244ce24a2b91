// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <memory>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "spinent/spinent.hpp"

using namespace spinent;

namespace {

double tridiagonal_residual(std::span<const double> alpha, std::span<const double> beta,
                            double lambda, std::span<const double> v) {
    const std::size_t n = alpha.size();
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = alpha[i] * v[i];
        if (i > 0) t += beta[i - 1] * v[i - 1];
        if (i + 1 < n) t += beta[i] * v[i + 1];
        t -= lambda * v[i];
        r2 += t * t;
    }
    return std::sqrt(r2);
}

} // namespace

TEST_CASE("tridiagonal solver handles the smallest cases exactly", "[eigensolver]") {
    {
        const std::vector<double> alpha{3.5};
        const auto r = solve_symmetric_tridiagonal(alpha, {});
        REQUIRE(r.eigenvalues.size() == 1);
        CHECK(r.eigenvalues[0] == 3.5);
        CHECK(std::abs(r.eigenvectors[0][0]) == 1.0);
    }
    {
        // [[0, 1], [1, 0]] -> {-1, +1}
        const std::vector<double> alpha{0.0, 0.0}, beta{1.0};
        const auto r = solve_symmetric_tridiagonal(alpha, beta);
        REQUIRE(r.eigenvalues.size() == 2);
        CHECK(r.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-14));
        CHECK(r.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
    }
    {
        // Free-particle 3x3: {-sqrt(2), 0, sqrt(2)}.
        const std::vector<double> alpha{0.0, 0.0, 0.0}, beta{1.0, 1.0};
        const auto r = solve_symmetric_tridiagonal(alpha, beta);
        CHECK(r.eigenvalues[0] == Catch::Approx(-std::sqrt(2.0)).margin(1e-14));
        CHECK(r.eigenvalues[1] == Catch::Approx(0.0).margin(1e-14));
        CHECK(r.eigenvalues[2] == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
    }
}

TEST_CASE("tridiagonal solver validates its inputs", "[eigensolver]") {
    CHECK_THROWS_AS(solve_symmetric_tridiagonal({}, {}), ParameterError);
    const std::vector<double> alpha{1.0, 2.0}, beta{0.5, 0.5};
    CHECK_THROWS_AS(solve_symmetric_tridiagonal(alpha, beta), ParameterError);
}

TEST_CASE("tridiagonal solver agrees with a dense eigensolver", "[eigensolver]") {
    oracle::TestRng rng(42);
    for (int trial = 0; trial < 4; ++trial) {
        const std::size_t n = 50;
        std::vector<double> alpha(n), beta(n - 1);
        for (auto& a : alpha) a = rng.uniform(-2.0, 2.0);
        for (auto& b : beta) b = rng.uniform(-1.5, 1.5);

        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(t, Eigen::EigenvaluesOnly);

        const auto r = solve_symmetric_tridiagonal(alpha, beta);
        REQUIRE(r.eigenvalues.size() == n);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(r.eigenvalues[k] == Catch::Approx(ref.eigenvalues()[k]).margin(1e-12));
        // Eigenvectors: residual and normalization.
        for (std::size_t k = 0; k < n; k += 7) {
            CHECK(tridiagonal_residual(alpha, beta, r.eigenvalues[k], r.eigenvectors[k]) < 1e-11);
            double nrm = 0.0;
            for (double x : r.eigenvectors[k]) nrm += x * x;
            CHECK(nrm == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("inverse iteration eigenvector matches the QL eigenvalue", "[eigensolver]") {
    oracle::TestRng rng(7);
    const std::size_t n = 40;
    std::vector<double> alpha(n), beta(n - 1);
    for (auto& a : alpha) a = rng.uniform(-1.0, 1.0);
    for (auto& b : beta) b = rng.uniform(0.1, 1.0);
    const auto r = solve_symmetric_tridiagonal(alpha, beta, /*want_vectors=*/false);
    for (std::size_t k : {std::size_t{0}, n / 2, n - 1}) {
        const auto v = detail::tridiagonal_eigenvector(alpha, beta, r.eigenvalues[k]);
        CHECK(tridiagonal_residual(alpha, beta, r.eigenvalues[k], v) < 1e-10);
    }
}

TEST_CASE("lanczos reproduces dense ground energies", "[eigensolver]") {
    struct Case {
        ModelSpec model;
        int up;
    };
    const Case cases[] = {
        {build_xxz_chain(8, 1.0, 0.7), 4},
        {build_xxz_chain(9, 1.0, -0.4), 4},
        {build_dimerized_chain(8, 1.0, 0.6), 4},
        {build_ladder(4, 1.0, 1.3, 0.5), 4},
    };
    for (const auto& c : cases) {
        auto basis = std::make_shared<const SectorBasis>(c.model.site_count, c.up);
        const auto dense = dense_spectrum(c.model, *basis);
        const auto lz = lanczos_ground_state(c.model, basis);
        INFO("sites = " << c.model.site_count);
        CHECK(std::abs(lz.energy - dense.eigenvalues[0]) <= 1e-10);
        CHECK(lz.residual <= 1e-8 * std::max(1.0, std::abs(lz.energy)));
        CHECK(lz.wavefunction.norm() == Catch::Approx(1.0).margin(1e-12));
        CHECK(lz.iterations_used >= 1);
        CHECK(lz.iterations_used <= 500);
    }
}

TEST_CASE("lanczos residual is the measured two-norm", "[eigensolver]") {
    const auto model = build_xxz_chain(8, 1.0, 0.3);
    auto basis = std::make_shared<const SectorBasis>(8, 4);
    const auto lz = lanczos_ground_state(model, basis);
    const auto hpsi = apply_hamiltonian(model, *basis, lz.wavefunction.amplitudes);
    double r2 = 0.0;
    for (std::size_t k = 0; k < hpsi.size(); ++k) {
        const double r = hpsi[k] - lz.energy * lz.wavefunction.amplitudes[k];
        r2 += r * r;
    }
    CHECK(std::sqrt(r2) == Catch::Approx(lz.residual).margin(1e-14));
}

TEST_CASE("ground Ritz values decrease monotonically", "[eigensolver]") {
    const auto model = build_ladder(4, 1.0, 0.9, 1.0);
    auto basis = std::make_shared<const SectorBasis>(8, 4);
    const auto lz = lanczos_ground_state(model, basis);
    REQUIRE(lz.ritz_history.size() == static_cast<std::size_t>(lz.iterations_used));
    const double scale = std::max(1.0, std::abs(lz.energy));
    for (std::size_t j = 1; j < lz.ritz_history.size(); ++j)
        CHECK(lz.ritz_history[j] <= lz.ritz_history[j - 1] + 1e-12 * scale);
    CHECK(lz.ritz_history.back() == lz.energy);
}

TEST_CASE("lanczos is deterministic for a fixed seed", "[eigensolver]") {
    const auto model = build_dimerized_chain(8, 1.0, 0.4);
    auto basis = std::make_shared<const SectorBasis>(8, 4);
    const auto a = lanczos_ground_state(model, basis);
    const auto b = lanczos_ground_state(model, basis);
    REQUIRE(a.wavefunction.amplitudes.size() == b.wavefunction.amplitudes.size());
    CHECK(std::memcmp(a.wavefunction.amplitudes.data(), b.wavefunction.amplitudes.data(),
                      a.wavefunction.amplitudes.size() * sizeof(double)) == 0);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("ground state is seed independent", "[eigensolver]") {
    const auto model = build_xxz_chain(8, 1.0, 0.5);
    auto basis = std::make_shared<const SectorBasis>(8, 4);
    LanczosConfig cfg;
    cfg.seed = 1;
    const auto ref = lanczos_ground_state(model, basis, cfg);
    for (std::uint64_t seed : {2ull, 3ull, 99ull}) {
        cfg.seed = seed;
        const auto alt = lanczos_ground_state(model, basis, cfg);
        CHECK(std::abs(alt.energy - ref.energy) <= 1e-10);
        double overlap = 0.0;
        for (std::size_t k = 0; k < ref.wavefunction.amplitudes.size(); ++k)
            overlap += ref.wavefunction.amplitudes[k] * alt.wavefunction.amplitudes[k];
        // Non-degenerate ground state, so the states may differ only in sign,
        // and the sign convention fixes that.
        CHECK(overlap == Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("sign convention puts the largest amplitude positive", "[eigensolver]") {
    const auto model = build_xxz_chain(6, 1.0, 1.0);
    auto basis = std::make_shared<const SectorBasis>(6, 3);
    const auto lz = lanczos_ground_state(model, basis);
    std::size_t imax = 0;
    for (std::size_t k = 1; k < lz.wavefunction.amplitudes.size(); ++k)
        if (std::abs(lz.wavefunction.amplitudes[k]) > std::abs(lz.wavefunction.amplitudes[imax]))
            imax = k;
    CHECK(lz.wavefunction.amplitudes[imax] > 0.0);
}

TEST_CASE("sector gap and degeneracy flag", "[eigensolver]") {
    {
        // N=4 Heisenberg ring, Sz=0: spectrum {-2, -1, 0, 0, 0, 1}.
        const auto model = build_xxz_chain(4, 1.0, 1.0);
        auto basis = std::make_shared<const SectorBasis>(4, 2);
        const auto lz = lanczos_ground_state(model, basis);
        CHECK(lz.energy == Catch::Approx(-2.0).margin(1e-10));
        CHECK(lz.sector_gap == Catch::Approx(1.0).margin(1e-8));
        CHECK_FALSE(lz.degenerate_flag);
    }
    {
        // A single near-zero bond: the two Sz=0 levels collapse to within
        // 1e-9, which the exhausted two-step Krylov space resolves exactly.
        ModelSpec m;
        m.kind = ModelKind::chain;
        m.site_count = 2;
        m.bonds = {{0, 1, 1e-9, 1.0}};
        auto basis = std::make_shared<const SectorBasis>(2, 1);
        const auto lz = lanczos_ground_state(m, basis);
        CHECK(lz.energy == Catch::Approx(-0.75e-9).margin(1e-20));
        CHECK(lz.sector_gap == Catch::Approx(1e-9).epsilon(1e-3));
        CHECK(lz.degenerate_flag);
    }
}

TEST_CASE("Sz = 0 sector carries the global ground state", "[eigensolver]") {
    const auto model = build_xxz_chain(6, 1.0, 0.8);
    double best = std::numeric_limits<double>::infinity();
    int best_up = -1;
    for (int up = 0; up <= 6; ++up) {
        const SectorBasis basis(6, up);
        const auto dense = dense_spectrum(model, basis);
        if (dense.eigenvalues[0] < best) {
            best = dense.eigenvalues[0];
            best_up = up;
        }
    }
    CHECK(best_up == 3);
}

TEST_CASE("dense spectrum matches the full-space oracle sector by sector", "[eigensolver]") {
    const auto model = build_xxz_chain(6, 1.0, 0.7);
    const auto full = oracle::full_hamiltonian(model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(full, Eigen::EigenvaluesOnly);
    std::vector<double> collected;
    for (int up = 0; up <= 6; ++up) {
        const SectorBasis basis(6, up);
        const auto dense = dense_spectrum(model, basis);
        collected.insert(collected.end(), dense.eigenvalues.begin(), dense.eigenvalues.end());
    }
    REQUIRE(collected.size() == 64);
    std::sort(collected.begin(), collected.end());
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(collected[k] == Catch::Approx(ref.eigenvalues()[k]).margin(1e-12));
}

TEST_CASE("XY ring spectrum is particle-hole symmetric", "[eigensolver]") {
    // At delta = 0 on a bipartite ring, flipping the z axis on one sublattice
    // maps H to -H, so the full spectrum is symmetric about zero.
    const auto model = build_xxz_chain(6, 1.0, 0.0);
    const auto full = oracle::full_hamiltonian(model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(full, Eigen::EigenvaluesOnly);
    const auto& ev = s.eigenvalues();
    for (Eigen::Index k = 0; k < ev.size(); ++k)
        CHECK(ev[k] == Catch::Approx(-ev[ev.size() - 1 - k]).margin(1e-12));
}

TEST_CASE("dense eigenvectors satisfy the eigenvalue equation", "[eigensolver]") {
    const auto model = build_dimerized_chain(6, 1.0, 0.5);
    const SectorBasis basis(6, 3);
    const auto dense = dense_spectrum(model, basis, /*want_vectors=*/true);
    REQUIRE(dense.eigenvectors.cols() == static_cast<Eigen::Index>(basis.dimension()));
    const SectorHamiltonian h(model, basis);
    std::vector<double> v(basis.dimension()), hv(basis.dimension());
    for (Eigen::Index k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < basis.dimension(); ++i)
            v[i] = dense.eigenvectors(static_cast<Eigen::Index>(i), k);
        h.apply(v, hv);
        double r2 = 0.0;
        for (std::size_t i = 0; i < basis.dimension(); ++i) {
            const double r = hv[i] - dense.eigenvalues[static_cast<std::size_t>(k)] * v[i];
            r2 += r * r;
        }
        CHECK(std::sqrt(r2) < 1e-11);
    }
}

TEST_CASE("solver guards its configuration and limits", "[eigensolver]") {
    const auto model = build_xxz_chain(6, 1.0, 1.0);
    auto basis = std::make_shared<const SectorBasis>(6, 3);

    LanczosConfig bad;
    bad.max_iterations = 1;
    CHECK_THROWS_AS(lanczos_ground_state(model, basis, bad), ParameterError);
    bad = {};
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(lanczos_ground_state(model, basis, bad), ParameterError);
    CHECK_THROWS_AS(lanczos_ground_state(model, nullptr), ParameterError);

    // Far too few iterations for a 10-site ring: reported as NumericalError.
    const auto big = build_xxz_chain(10, 1.0, 1.0);
    auto big_basis = std::make_shared<const SectorBasis>(10, 5);
    LanczosConfig starved;
    starved.max_iterations = 2;
    CHECK_THROWS_AS(lanczos_ground_state(big, big_basis, starved), NumericalError);

    // Dense path refuses sectors beyond its cap.
    const auto wide = build_xxz_chain(15, 1.0, 1.0);
    const SectorBasis wide_basis(15, 7); // C(15,7) = 6435
    CHECK_THROWS_AS(dense_spectrum(wide, wide_basis), ParameterError);
}

TEST_CASE("frozen reference energies", "[eigensolver]") {
    // Anchors computed once through the dense route and pinned as literals, so
    // a silent change in either solver path shows up against a fixed number.
    // The 8-site Heisenberg ring value also matches the known exact result
    // -3.6510934089371763.
    struct Anchor {
        ModelSpec model;
        double e0;
    };
    const Anchor anchors[] = {
        {build_xxz_chain(8, 1.0, 1.0), -3.65109340893718},
        {build_xxz_chain(12, 1.0, 0.5), -4.55727244083043},
        {build_dimerized_chain(12, 1.0, 0.5), -4.66191523734873},
    };
    for (const auto& a : anchors) {
        auto basis = std::make_shared<const SectorBasis>(a.model.site_count, a.model.site_count / 2);
        const auto gs = lanczos_ground_state(a.model, basis);
        CHECK(gs.energy == Catch::Approx(a.e0).margin(1e-9));
    }
}
