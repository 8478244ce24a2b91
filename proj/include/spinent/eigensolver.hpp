// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinent/errors.hpp"
#include "spinent/model.hpp"

namespace spinent {

struct LanczosConfig {
    int max_iterations = 500;
    double tolerance = 1e-12; // convergence threshold on the ground Ritz value change
    std::uint64_t seed = 1;   // seeds the deterministic start vector
    bool reorthogonalize = true;
};

struct GroundStateResult {
    double energy = 0.0;
    WaveFunction wavefunction;
    int iterations_used = 0;
    double sector_gap = std::numeric_limits<double>::infinity(); // E1 - E0 within the sector
    bool degenerate_flag = false;
    double residual = 0.0;            // ||H psi - E0 psi||_2, measured
    std::vector<double> ritz_history; // ground Ritz value after each iteration
};

struct TridiagonalEigenResult {
    std::vector<double> eigenvalues;               // ascending
    std::vector<std::vector<double>> eigenvectors; // eigenvectors[k] pairs with eigenvalues[k]
};

/// Implicit-shift QL eigendecomposition of a symmetric tridiagonal matrix.
/// alpha holds the diagonal, beta the n-1 off-diagonal entries.
inline TridiagonalEigenResult solve_symmetric_tridiagonal(std::span<const double> alpha,
                                                          std::span<const double> beta,
                                                          bool want_vectors = true) {
    const std::size_t n = alpha.size();
    if (n == 0) throw ParameterError("solve_symmetric_tridiagonal: empty diagonal");
    if (beta.size() + 1 != n)
        throw ParameterError("solve_symmetric_tridiagonal: off-diagonal must have n-1 entries");

    std::vector<double> d(alpha.begin(), alpha.end());
    std::vector<double> e(n, 0.0);
    std::copy(beta.begin(), beta.end(), e.begin());

    // z is row-major: z[i*n + j] = component i of eigenvector j.
    std::vector<double> z;
    if (want_vectors) {
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    }

    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw NumericalError("solve_symmetric_tridiagonal: QL iteration did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(m) - 1;
                     i >= static_cast<std::ptrdiff_t>(l); --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) { // rotation annihilated early; restart the scan
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors) {
                        double* zi = z.data() + i;
                        for (std::size_t k = 0; k < n; ++k, zi += n) {
                            f = zi[1];
                            zi[1] = s * zi[0] + c * f;
                            zi[0] = c * zi[0] - s * f;
                        }
                    }
                }
                if (!underflow) {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        } while (m != l);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&d](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    TridiagonalEigenResult out;
    out.eigenvalues.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = d[order[k]];
    if (want_vectors) {
        out.eigenvectors.assign(n, std::vector<double>(n));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors[k][i] = z[i * n + order[k]];
    }
    return out;
}

namespace detail {

/// Deterministic start vector: 64-bit LCG mapped into (-1, 1), then normalized.
inline std::vector<double> lcg_unit_vector(std::size_t dim, std::uint64_t seed) {
    std::vector<double> v(dim);
    std::uint64_t state = seed;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const double u = static_cast<double>(state >> 11) / 9007199254740992.0; // [0,1)
        v[i] = 2.0 * u - 1.0;
        norm2 += v[i] * v[i];
    }
    if (norm2 < 1e-300) { // cannot happen in practice
        v[0] = 1.0;
        norm2 = 1.0;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

/// Eigenvector of the symmetric tridiagonal (alpha, beta) for the eigenvalue
/// nearest theta, by inverse iteration on a pivoted tridiagonal LU factorization.
inline std::vector<double> tridiagonal_eigenvector(std::span<const double> alpha,
                                                   std::span<const double> beta, double theta) {
    const std::size_t n = alpha.size();
    if (n == 1) return {1.0};

    double scale = std::abs(theta);
    for (double a : alpha) scale = std::max(scale, std::abs(a));
    for (double b : beta) scale = std::max(scale, std::abs(b));
    scale = std::max(scale, 1.0);
    const double tiny = std::numeric_limits<double>::epsilon() * scale * 1e-3;

    // LU of (T - theta I) with partial pivoting; du2 holds fill-in.
    std::vector<double> dl(n - 1), dd(n), du(n - 1), du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<char> piv(n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = alpha[i] - theta;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        dl[i] = beta[i];
        du[i] = beta[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(dd[i]) >= std::abs(dl[i])) {
            if (std::abs(dd[i]) < tiny) dd[i] = std::copysign(tiny, dd[i] == 0.0 ? 1.0 : dd[i]);
            const double fact = dl[i] / dd[i];
            dl[i] = fact;
            dd[i + 1] -= fact * du[i];
            piv[i] = 0;
        } else {
            const double fact = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = temp - fact * dd[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            piv[i] = 1;
        }
    }
    if (std::abs(dd[n - 1]) < tiny) dd[n - 1] = std::copysign(tiny, dd[n - 1] == 0.0 ? 1.0 : dd[n - 1]);

    auto solve_normalize = [&](std::vector<double>& b) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!piv[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl[i] * b[i];
            }
        }
        b[n - 1] /= dd[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 3; i >= 0; --i)
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
        double nrm = 0.0;
        for (double v : b) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0 || !std::isfinite(nrm)) return false;
        for (double& v : b) v /= nrm;
        return true;
    };
    auto max_residual = [&](const std::vector<double>& y) {
        double rmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = (alpha[i] - theta) * y[i];
            if (i > 0) r += beta[i - 1] * y[i - 1];
            if (i + 1 < n) r += beta[i] * y[i + 1];
            rmax = std::max(rmax, std::abs(r));
        }
        return rmax;
    };

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    bool ok = solve_normalize(x) && solve_normalize(x);
    if (!ok || max_residual(x) > 1e-4 * scale) {
        // the uniform start was (nearly) orthogonal to the target; restart
        std::uint64_t s = 0x9e3779b97f4a7c15ull;
        for (std::size_t i = 0; i < n; ++i) {
            s = s * 6364136223846793005ull + 1442695040888963407ull;
            x[i] = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
        }
        solve_normalize(x);
        solve_normalize(x);
        solve_normalize(x);
    }
    return x;
}

} // namespace detail

/// Lanczos ground-state solve in one Sz sector. Deterministic for a fixed seed;
/// full reorthogonalization (all Lanczos vectors kept) by default. Converges on
/// the ground Ritz value change and on the estimated residual, then verifies the
/// true residual ||H psi - E0 psi|| <= 1e-8 max(1, |E0|).
inline GroundStateResult lanczos_ground_state(const ModelSpec& model,
                                              std::shared_ptr<const SectorBasis> basis,
                                              const LanczosConfig& cfg = {}) {
    if (!basis || basis->dimension() == 0)
        throw ParameterError("lanczos_ground_state: empty basis");
    if (cfg.max_iterations < 2)
        throw ParameterError("lanczos_ground_state: max_iterations must be >= 2");
    if (!(cfg.tolerance > 0))
        throw ParameterError("lanczos_ground_state: tolerance must be positive");

    const SectorHamiltonian h(model, *basis);
    const std::size_t dim = basis->dimension();
    const std::size_t m_max = std::min<std::size_t>(static_cast<std::size_t>(cfg.max_iterations), dim);

    std::vector<std::vector<double>> lanczos_vectors;
    lanczos_vectors.push_back(detail::lcg_unit_vector(dim, cfg.seed));
    std::vector<double> alpha, beta;
    std::vector<double> w(dim);

    auto dot = [dim](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
        return s;
    };

    double theta = 0.0;
    double theta2 = std::numeric_limits<double>::infinity();
    double prev_theta = std::numeric_limits<double>::infinity();
    std::vector<double> ritz_history;
    std::vector<double> tri_ground; // ground eigenvector of the current tridiagonal
    bool exhausted = false;
    std::size_t m = 0;

    const double breakdown_floor = 1e-13;

    for (std::size_t j = 0; j < m_max; ++j) {
        const std::vector<double>& vj = lanczos_vectors[j];
        h.apply(vj, w);
        if (j > 0) {
            const std::vector<double>& vp = lanczos_vectors[j - 1];
            const double bprev = beta[j - 1];
            for (std::size_t i = 0; i < dim; ++i) w[i] -= bprev * vp[i];
        }
        const double a = dot(w, vj);
        alpha.push_back(a);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * vj[i];

        if (cfg.reorthogonalize) {
            double before2 = 0.0;
            for (double x : w) before2 += x * x;
            for (const auto& u : lanczos_vectors) {
                const double c = dot(w, u);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * u[i];
            }
            double after2 = 0.0;
            for (double x : w) after2 += x * x;
            if (after2 < 0.5 * before2) { // DGKS: one more pass when cancellation was heavy
                for (const auto& u : lanczos_vectors) {
                    const double c = dot(w, u);
                    for (std::size_t i = 0; i < dim; ++i) w[i] -= c * u[i];
                }
            }
        }

        double b2 = 0.0;
        for (double x : w) b2 += x * x;
        const double b = std::sqrt(b2);

        const auto tri = solve_symmetric_tridiagonal(alpha, beta, /*want_vectors=*/false);
        theta = tri.eigenvalues[0];
        theta2 = tri.eigenvalues.size() > 1 ? tri.eigenvalues[1]
                                            : std::numeric_limits<double>::infinity();
        ritz_history.push_back(theta);

        const double scale = std::max(1.0, std::abs(theta));
        double resid_estimate;
        if (alpha.size() == 1) {
            tri_ground.assign(1, 1.0);
            resid_estimate = b;
        } else {
            tri_ground = detail::tridiagonal_eigenvector(alpha, beta, theta);
            resid_estimate = b * std::abs(tri_ground.back());
        }

        const bool value_settled = std::abs(theta - prev_theta) < cfg.tolerance;
        prev_theta = theta;
        exhausted = (b <= breakdown_floor * scale) || (j + 1 == dim);

        m = j + 1;
        if ((value_settled && resid_estimate <= 1e-9 * scale) || exhausted || m == m_max) break;

        beta.push_back(b);
        std::vector<double> next(dim);
        const double inv = 1.0 / b;
        for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] * inv;
        lanczos_vectors.push_back(std::move(next));
    }

    // Recombine the tridiagonal ground eigenvector with the stored basis.
    std::vector<double> psi(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double yi = tri_ground[i];
        const std::vector<double>& vi = lanczos_vectors[i];
        for (std::size_t k = 0; k < dim; ++k) psi[k] += yi * vi[k];
    }
    double nrm2 = 0.0;
    for (double x : psi) nrm2 += x * x;
    const double inv_norm = 1.0 / std::sqrt(nrm2);
    for (double& x : psi) x *= inv_norm;

    // Sign convention: the largest-magnitude amplitude is positive.
    std::size_t imax = 0;
    for (std::size_t k = 1; k < dim; ++k)
        if (std::abs(psi[k]) > std::abs(psi[imax])) imax = k;
    if (psi[imax] < 0.0)
        for (double& x : psi) x = -x;

    h.apply(psi, w);
    double r2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double r = w[k] - theta * psi[k];
        r2 += r * r;
    }
    const double residual = std::sqrt(r2);
    const double scale = std::max(1.0, std::abs(theta));
    if (residual > 1e-8 * scale)
        throw NumericalError("lanczos_ground_state: no convergence after " + std::to_string(m) +
                             " iterations (best E0 = " + std::to_string(theta) +
                             ", residual = " + std::to_string(residual) + ")");

    GroundStateResult out;
    out.energy = theta;
    out.wavefunction = WaveFunction{std::move(basis), std::move(psi)};
    out.iterations_used = static_cast<int>(m);
    out.sector_gap = theta2 - theta;
    out.degenerate_flag = out.sector_gap < 1e-8 * scale;
    out.residual = residual;
    out.ritz_history = std::move(ritz_history);
    return out;
}

struct DenseSpectrum {
    std::vector<double> eigenvalues; // ascending
    Eigen::MatrixXd eigenvectors;    // columns pair with eigenvalues; empty unless requested
};

/// Assembles the dense sector matrix and fully diagonalizes it. Validation
/// oracle for the Lanczos path; capped at dimension 4000.
inline DenseSpectrum dense_spectrum(const ModelSpec& model, const SectorBasis& basis,
                                    bool want_vectors = false) {
    const std::size_t dim = basis.dimension();
    if (dim > 4000) throw ParameterError("dense_spectrum: sector dimension exceeds the 4000 cap");
    if (model.site_count != basis.site_count())
        throw ParameterError("dense_spectrum: model and basis site counts differ");

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const config_t c = basis.state(k);
        for (const Bond& bond : model.bonds) {
            const config_t mask =
                (config_t{1} << bond.site_a) | (config_t{1} << bond.site_b);
            if (popcount(c & mask) == 1) {
                h(k, k) -= 0.25 * bond.coupling * bond.anisotropy;
                const std::size_t t = basis.index_unchecked(c ^ mask);
                h(t, k) += 0.5 * bond.coupling;
            } else {
                h(k, k) += 0.25 * bond.coupling * bond.anisotropy;
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("dense_spectrum: eigensolver failed");

    DenseSpectrum out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    if (want_vectors) out.eigenvectors = solver.eigenvectors();
    return out;
}

} // namespace spinent
