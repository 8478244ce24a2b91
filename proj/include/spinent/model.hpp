// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spinent/basis.hpp"
#include "spinent/bits.hpp"
#include "spinent/errors.hpp"

namespace spinent {

/// One XXZ-type exchange bond: J (Sx Sx + Sy Sy + delta Sz Sz) with S = sigma/2.
struct Bond {
    int site_a = 0;
    int site_b = 0;
    double coupling = 0.0;   // J
    double anisotropy = 1.0; // delta
};

/// Raw couplings the model was built from, kept for reporting.
struct ModelParameters {
    double j = 0.0;
    double delta = 1.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double jp = 0.0;
    int n_rungs = 0;
};

struct ModelSpec {
    ModelKind kind = ModelKind::chain;
    int site_count = 0;
    std::vector<Bond> bonds;
    ModelParameters params;
};

/// Periodic XXZ ring: N bonds (i, i+1 mod N), coupling J, anisotropy delta.
[[nodiscard]] inline ModelSpec build_xxz_chain(int site_count, double j, double delta) {
    if (site_count < 3)
        throw ParameterError("xxz chain needs at least 3 sites (a 2-site ring double-counts its bond)");
    if (site_count > kMaxSites)
        throw ParameterError("xxz chain supports at most 32 sites");
    ModelSpec m;
    m.kind = ModelKind::chain;
    m.site_count = site_count;
    m.params.j = j;
    m.params.delta = delta;
    m.bonds.reserve(site_count);
    for (int i = 0; i < site_count; ++i)
        m.bonds.push_back({i, (i + 1) % site_count, j, delta});
    return m;
}

/// Dimerized Heisenberg ring: alternating J1 bonds (2k, 2k+1) and J2 bonds
/// (2k+1, 2k+2 mod N), all with the full dot product (delta = 1).
[[nodiscard]] inline ModelSpec build_dimerized_chain(int site_count, double j1, double j2) {
    if (site_count < 4 || site_count % 2 != 0)
        throw ParameterError("dimerized chain needs an even site count >= 4");
    if (site_count > kMaxSites)
        throw ParameterError("dimerized chain supports at most 32 sites");
    ModelSpec m;
    m.kind = ModelKind::dimer;
    m.site_count = site_count;
    m.params.j1 = j1;
    m.params.j2 = j2;
    m.params.delta = 1.0;
    m.bonds.reserve(site_count);
    for (int k = 0; k < site_count / 2; ++k) {
        m.bonds.push_back({2 * k, 2 * k + 1, j1, 1.0});
        m.bonds.push_back({2 * k + 1, (2 * k + 2) % site_count, j2, 1.0});
    }
    return m;
}

/// Two-leg ladder: periodic legs with coupling J, rungs with coupling Jp, the
/// same anisotropy on both. Site index = leg * n_rungs + rung.
[[nodiscard]] inline ModelSpec build_ladder(int n_rungs, double j, double jp, double delta) {
    if (n_rungs < 3)
        throw ParameterError("ladder needs at least 3 rungs");
    if (2 * n_rungs > kMaxSites)
        throw ParameterError("ladder supports at most 16 rungs");
    ModelSpec m;
    m.kind = ModelKind::ladder;
    m.site_count = 2 * n_rungs;
    m.params.j = j;
    m.params.jp = jp;
    m.params.delta = delta;
    m.params.n_rungs = n_rungs;
    m.bonds.reserve(3 * n_rungs);
    for (int leg = 0; leg < 2; ++leg)
        for (int r = 0; r < n_rungs; ++r)
            m.bonds.push_back({leg * n_rungs + r, leg * n_rungs + (r + 1) % n_rungs, j, delta});
    for (int r = 0; r < n_rungs; ++r)
        m.bonds.push_back({r, n_rungs + r, jp, delta});
    return m;
}

/// Real amplitudes over one Sz sector. All three Hamiltonians are real
/// symmetric in the computational basis, so no complex storage is needed.
struct WaveFunction {
    std::shared_ptr<const SectorBasis> basis;
    std::vector<double> amplitudes;

    [[nodiscard]] double norm() const noexcept {
        double s = 0;
        for (double a : amplitudes) s += a * a;
        return std::sqrt(s);
    }
};

/// A model fixed to one sector, with the off-diagonal structure precomputed so
/// repeated applications (Lanczos) are plain gathers. Matrix elements per bond:
/// diagonal J*delta*(+1/4 aligned, -1/4 anti-aligned); off-diagonal J/2 between
/// the two configurations that flip an anti-aligned pair.
class SectorHamiltonian {
public:
    SectorHamiltonian(const ModelSpec& model, const SectorBasis& basis) {
        if (model.site_count != basis.site_count())
            throw ParameterError("SectorHamiltonian: model and basis site counts differ");
        for (const Bond& b : model.bonds) {
            if (b.site_a == b.site_b || b.site_a < 0 || b.site_b < 0 ||
                b.site_a >= model.site_count || b.site_b >= model.site_count)
                throw ParameterError("SectorHamiltonian: bond references an invalid site pair");
        }
        const std::size_t dim = basis.dimension();
        diag_.assign(dim, 0.0);
        offsets_.assign(dim + 1, 0);

        std::vector<config_t> masks(model.bonds.size());
        for (std::size_t b = 0; b < model.bonds.size(); ++b)
            masks[b] = (config_t{1} << model.bonds[b].site_a) |
                       (config_t{1} << model.bonds[b].site_b);

        // First pass: diagonal and per-row off-diagonal counts.
        for (std::size_t k = 0; k < dim; ++k) {
            const config_t c = basis.state(k);
            double d = 0.0;
            std::uint32_t row = 0;
            for (std::size_t b = 0; b < model.bonds.size(); ++b) {
                const bool anti = popcount(c & masks[b]) == 1;
                d += model.bonds[b].coupling * model.bonds[b].anisotropy * (anti ? -0.25 : 0.25);
                row += anti ? 1 : 0;
            }
            diag_[k] = d;
            offsets_[k + 1] = offsets_[k] + row;
        }
        targets_.resize(offsets_[dim]);
        coeffs_.resize(offsets_[dim]);

        // Second pass: flip targets and J/2 coefficients.
        std::size_t pos = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            const config_t c = basis.state(k);
            for (std::size_t b = 0; b < model.bonds.size(); ++b) {
                if (popcount(c & masks[b]) != 1) continue;
                targets_[pos] = static_cast<std::uint32_t>(basis.index_unchecked(c ^ masks[b]));
                coeffs_[pos] = 0.5 * model.bonds[b].coupling;
                ++pos;
            }
        }
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return diag_.size(); }

    /// out = H * v. Gather form: every output entry reads only its own row.
    void apply(std::span<const double> v, std::span<double> out) const {
        if (v.size() != dimension() || out.size() != dimension())
            throw ParameterError("apply_hamiltonian: vector dimension does not match the sector");
        const std::size_t dim = dimension();
        for (std::size_t k = 0; k < dim; ++k) {
            double acc = diag_[k] * v[k];
            for (std::size_t p = offsets_[k]; p < offsets_[k + 1]; ++p)
                acc += coeffs_[p] * v[targets_[p]];
            out[k] = acc;
        }
    }

private:
    std::vector<double> diag_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
    std::vector<double> coeffs_;
};

/// One-shot H * v for a sector wavefunction.
[[nodiscard]] inline std::vector<double> apply_hamiltonian(const ModelSpec& model,
                                                           const SectorBasis& basis,
                                                           std::span<const double> v) {
    SectorHamiltonian h(model, basis);
    std::vector<double> out(basis.dimension());
    h.apply(v, out);
    return out;
}

} // namespace spinent
