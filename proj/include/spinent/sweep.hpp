// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "spinent/basis.hpp"
#include "spinent/eigensolver.hpp"
#include "spinent/entanglement.hpp"
#include "spinent/errors.hpp"
#include "spinent/model.hpp"

namespace spinent {

enum class SweepParameter { delta, j2_over_j1, jp_over_j };

/// Uniform closed range start..stop in steps of step; always includes start.
struct SweepRange {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    void validate() const {
        if (!(step > 0.0)) throw ParameterError("SweepRange: step must be positive");
        if (stop < start - 1e-12) throw ParameterError("SweepRange: stop is before start");
        if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step))
            throw ParameterError("SweepRange: bounds must be finite");
    }
    [[nodiscard]] std::size_t count() const {
        validate();
        return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    }
    [[nodiscard]] double value(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

struct SweepSpec {
    ModelKind model = ModelKind::chain;
    int site_count = 8; // chain/dimer site count
    int n_rungs = 8;    // ladder rung count (2*n_rungs sites)

    double j = 1.0;  // chain/ladder leg coupling
    double j1 = 1.0; // dimer strong coupling
    double fixed_delta = 1.0;    // ladder jp sweep: anisotropy held fixed
    double fixed_jp_ratio = 1.0; // ladder delta sweep: J'/J held fixed

    SweepParameter parameter = SweepParameter::delta;
    SweepRange range;              // 1D
    SweepRange x_range, y_range;   // 2D: x = jp_over_j, y = delta

    BipartitionScheme bipartition = BipartitionScheme::odd_even();

    LanczosConfig lanczos;
    int threads = 1; // 0 = hardware concurrency
};

struct ObservableRow {
    std::array<double, 2> params{}; // [param] or [jp_over_j, delta]
    int param_count = 1;
    double energy = std::numeric_limits<double>::quiet_NaN();
    double entropy_bits = std::numeric_limits<double>::quiet_NaN();
    double entropy_per_site = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> concurrences;
    double sector_gap = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
    std::string error; // empty on success; solver failures are recorded, not fatal
};

struct SweepResult {
    std::vector<std::string> concurrence_labels;
    std::vector<ObservableRow> rows;
    int kept_sites = 0;
    int total_sites = 0;
    std::vector<double> xs, ys; // populated for 2D grids (row-major, x outer)
};

namespace detail {

struct PointTask {
    ModelSpec model;
    std::array<double, 2> params;
    int param_count;
};

inline std::vector<std::pair<int, int>> concurrence_pairs(ModelKind kind, int n_rungs) {
    switch (kind) {
    case ModelKind::chain: return {{0, 1}};
    case ModelKind::dimer: return {{0, 1}, {1, 2}};
    case ModelKind::ladder: return {{0, 1}, {0, n_rungs}};
    }
    throw ParameterError("concurrence_pairs: unknown model kind");
}

inline std::vector<std::string> concurrence_labels(ModelKind kind) {
    switch (kind) {
    case ModelKind::chain: return {"nn"};
    case ModelKind::dimer: return {"c1", "c2"};
    case ModelKind::ladder: return {"leg", "rung"};
    }
    throw ParameterError("concurrence_labels: unknown model kind");
}

inline ModelSpec model_at(const SweepSpec& spec, double x, double y, bool two_d) {
    if (two_d) {
        if (spec.model != ModelKind::ladder)
            throw ParameterError("run_sweep_2d: only the ladder sweeps two parameters");
        return build_ladder(spec.n_rungs, spec.j, x * spec.j, y);
    }
    switch (spec.model) {
    case ModelKind::chain:
        if (spec.parameter != SweepParameter::delta)
            throw ParameterError("run_sweep_1d: the XXZ chain sweeps delta only");
        return build_xxz_chain(spec.site_count, spec.j, x);
    case ModelKind::dimer:
        if (spec.parameter != SweepParameter::j2_over_j1)
            throw ParameterError("run_sweep_1d: the dimerized chain sweeps j2_over_j1 only");
        return build_dimerized_chain(spec.site_count, spec.j1, x * spec.j1);
    case ModelKind::ladder:
        if (spec.parameter == SweepParameter::delta)
            return build_ladder(spec.n_rungs, spec.j, spec.fixed_jp_ratio * spec.j, x);
        if (spec.parameter == SweepParameter::jp_over_j)
            return build_ladder(spec.n_rungs, spec.j, x * spec.j, spec.fixed_delta);
        throw ParameterError("run_sweep_1d: the ladder sweeps delta or jp_over_j");
    }
    throw ParameterError("run_sweep_1d: unknown model kind");
}

inline ObservableRow evaluate_point(const ModelSpec& model,
                                    const std::shared_ptr<const SectorBasis>& basis,
                                    const BipartitionMask& mask,
                                    const std::vector<std::pair<int, int>>& pairs,
                                    const LanczosConfig& lanczos) {
    ObservableRow row;
    try {
        const GroundStateResult gs = lanczos_ground_state(model, basis, lanczos);
        row.energy = gs.energy;
        row.sector_gap = gs.sector_gap;
        row.degenerate = gs.degenerate_flag;
        row.entropy_bits = subsystem_entropy(gs.wavefunction, mask);
        row.entropy_per_site = row.entropy_bits / static_cast<double>(mask.kept_count());
        row.concurrences.reserve(pairs.size());
        for (const auto& [a, b] : pairs)
            row.concurrences.push_back(concurrence_wootters(two_site_rdm(gs.wavefunction, a, b)));
    } catch (const NumericalError& e) {
        row.error = e.what();
        row.concurrences.assign(pairs.size(), std::numeric_limits<double>::quiet_NaN());
    }
    return row;
}

template <typename Fn>
inline void run_indexed(std::size_t n, int threads, Fn&& fn) {
    if (threads == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (threads < 0) throw ParameterError("sweep: thread count must be >= 0");
    const auto nthreads = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace detail

/// Ground-state observables along a 1D parameter line. Every point is solved
/// from a fresh deterministic start vector; a solver failure marks its row and
/// the sweep continues.
inline SweepResult run_sweep_1d(const SweepSpec& spec) {
    spec.range.validate();
    const std::size_t n = spec.range.count();

    const ModelSpec probe = detail::model_at(spec, spec.range.value(0), 0.0, false);
    const int sites = probe.site_count;
    auto basis = std::make_shared<const SectorBasis>(sites, sites / 2);
    const BipartitionMask mask = standard_bipartition(probe.kind, sites, spec.bipartition);
    const auto pairs = detail::concurrence_pairs(spec.model, spec.n_rungs);

    SweepResult out;
    out.concurrence_labels = detail::concurrence_labels(spec.model);
    out.kept_sites = mask.kept_count();
    out.total_sites = sites;
    out.rows.resize(n);

    detail::run_indexed(n, spec.threads, [&](std::size_t i) {
        const double p = spec.range.value(i);
        const ModelSpec model = detail::model_at(spec, p, 0.0, false);
        out.rows[i] = detail::evaluate_point(model, basis, mask, pairs, spec.lanczos);
        out.rows[i].params = {p, 0.0};
        out.rows[i].param_count = 1;
    });
    return out;
}

/// Ladder observables on a (J'/J, Delta) grid, row-major with J'/J as the
/// outer (slow) index.
inline SweepResult run_sweep_2d(const SweepSpec& spec) {
    spec.x_range.validate();
    spec.y_range.validate();
    const std::size_t nx = spec.x_range.count();
    const std::size_t ny = spec.y_range.count();

    const ModelSpec probe = detail::model_at(spec, spec.x_range.value(0), spec.y_range.value(0), true);
    const int sites = probe.site_count;
    auto basis = std::make_shared<const SectorBasis>(sites, sites / 2);
    const BipartitionMask mask = standard_bipartition(probe.kind, sites, spec.bipartition);
    const auto pairs = detail::concurrence_pairs(spec.model, spec.n_rungs);

    SweepResult out;
    out.concurrence_labels = detail::concurrence_labels(spec.model);
    out.kept_sites = mask.kept_count();
    out.total_sites = sites;
    out.rows.resize(nx * ny);
    out.xs.resize(nx);
    out.ys.resize(ny);
    for (std::size_t i = 0; i < nx; ++i) out.xs[i] = spec.x_range.value(i);
    for (std::size_t j = 0; j < ny; ++j) out.ys[j] = spec.y_range.value(j);

    detail::run_indexed(nx * ny, spec.threads, [&](std::size_t k) {
        const double x = out.xs[k / ny];
        const double y = out.ys[k % ny];
        const ModelSpec model = detail::model_at(spec, x, y, true);
        out.rows[k] = detail::evaluate_point(model, basis, mask, pairs, spec.lanczos);
        out.rows[k].params = {x, y};
        out.rows[k].param_count = 2;
    });
    return out;
}

enum class ExtremumKind { maximum, minimum, ridge, valley };
enum class SliceAxis { none, x, y };

struct BoundaryPoint {
    std::array<double, 2> coords{};
    int coord_count = 1;
    ExtremumKind kind = ExtremumKind::maximum;
    SliceAxis axis = SliceAxis::none;
    double value = 0.0;
    double second_derivative = 0.0;
};

namespace detail {

struct Extremum1D {
    std::size_t index; // plateau midpoint
    bool is_max;
    std::size_t left, right; // indices of the comparison neighbors
};

/// Strict interior extrema of a series, plateaus reported at their midpoint.
/// NaN entries never form or border an extremum. Endpoints are excluded.
template <typename Get>
inline std::vector<Extremum1D> local_extrema_series(std::size_t n, Get&& v) {
    std::vector<Extremum1D> out;
    std::size_t a = 0;
    while (a < n) {
        std::size_t b = a;
        while (b + 1 < n && v(b + 1) == v(a)) ++b; // NaN never equals, so it stays alone
        if (a > 0 && b + 1 < n && !std::isnan(v(a))) {
            const double left = v(a - 1);
            const double right = v(b + 1);
            const std::size_t mid = (a + b) / 2;
            if (left < v(a) && right < v(a))
                out.push_back({mid, true, a - 1, b + 1});
            else if (left > v(a) && right > v(a))
                out.push_back({mid, false, a - 1, b + 1});
        }
        a = b + 1;
    }
    return out;
}

inline double row_observable(const ObservableRow& row, const SweepResult& res,
                             const std::string& name) {
    if (name == "energy") return row.energy;
    if (name == "entropy_bits") return row.entropy_bits;
    if (name == "entropy_per_site") return row.entropy_per_site;
    if (name == "gap") return row.sector_gap;
    for (std::size_t c = 0; c < res.concurrence_labels.size(); ++c)
        if (name == "conc_" + res.concurrence_labels[c]) return row.concurrences[c];
    throw ParameterError("unknown observable column '" + name + "'");
}

} // namespace detail

/// Central first or second differences of a uniformly sampled series; the
/// result drops both endpoints (size n-2).
inline std::vector<double> central_differences(std::span<const double> values, double step,
                                               int order) {
    if (!(step > 0)) throw ParameterError("central_differences: step must be positive");
    if (order != 1 && order != 2) throw ParameterError("central_differences: order must be 1 or 2");
    if (values.size() < 3) throw ParameterError("central_differences: need at least 3 samples");
    std::vector<double> out(values.size() - 2);
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        out[k - 1] = order == 1
                         ? (values[k + 1] - values[k - 1]) / (2.0 * step)
                         : (values[k + 1] - 2.0 * values[k] + values[k - 1]) / (step * step);
    }
    return out;
}

/// Strict interior extrema of a 1D series sampled at the given parameters.
inline std::vector<BoundaryPoint> find_local_extrema(std::span<const double> params,
                                                     std::span<const double> values) {
    if (params.size() != values.size())
        throw ParameterError("find_local_extrema: params and values differ in length");
    auto value = [&](std::size_t i) { return values[i]; };
    std::vector<BoundaryPoint> out;
    for (const auto& e : detail::local_extrema_series(values.size(), value)) {
        BoundaryPoint p;
        p.coords = {params[e.index], 0.0};
        p.coord_count = 1;
        p.kind = e.is_max ? ExtremumKind::maximum : ExtremumKind::minimum;
        p.axis = SliceAxis::none;
        p.value = values[e.index];
        const double h = params[e.index] - params[e.index - 1];
        p.second_derivative =
            (values[e.index + 1] - 2.0 * values[e.index] + values[e.index - 1]) / (h * h);
        out.push_back(p);
    }
    return out;
}

/// Strict interior extrema of one observable along a 1D sweep.
inline std::vector<BoundaryPoint> find_local_extrema(const SweepResult& res,
                                                     const std::string& observable) {
    if (!res.xs.empty()) throw ParameterError("find_local_extrema: expected a 1D sweep result");
    std::vector<double> params(res.rows.size()), values(res.rows.size());
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        params[i] = res.rows[i].params[0];
        values[i] = detail::row_observable(res.rows[i], res, observable);
    }
    return find_local_extrema(params, values);
}

/// Scalar field on a uniform 2D grid, row-major with x as the outer index.
struct Grid2D {
    std::vector<double> xs, ys;
    std::vector<double> values; // values[ix * ys.size() + iy]

    [[nodiscard]] double at(std::size_t ix, std::size_t iy) const {
        return values[ix * ys.size() + iy];
    }
    void validate() const {
        if (xs.size() < 2 || ys.size() < 2)
            throw ParameterError("Grid2D: need at least a 2x2 grid");
        if (values.size() != xs.size() * ys.size())
            throw ParameterError("Grid2D: value count does not match the axes");
    }
};

/// Builds a Grid2D of one observable from a 2D sweep result.
inline Grid2D grid_from_sweep(const SweepResult& res, const std::string& observable) {
    if (res.xs.empty() || res.ys.empty())
        throw ParameterError("grid_from_sweep: expected a 2D sweep result");
    Grid2D g;
    g.xs = res.xs;
    g.ys = res.ys;
    g.values.resize(res.rows.size());
    for (std::size_t k = 0; k < res.rows.size(); ++k)
        g.values[k] = detail::row_observable(res.rows[k], res, observable);
    return g;
}

/// Axis-aligned ridge/valley points of a 2D field: strict 1D extrema along
/// each grid axis whose curvature clears the threshold tau. Along-x points
/// come first (y-major order), then along-y points (x-major order).
inline std::vector<BoundaryPoint> extract_ridges_valleys(const Grid2D& grid, double tau = 1e-4) {
    grid.validate();
    if (!(tau >= 0)) throw ParameterError("extract_ridges_valleys: tau must be non-negative");
    const std::size_t nx = grid.xs.size();
    const std::size_t ny = grid.ys.size();
    std::vector<BoundaryPoint> out;

    for (std::size_t iy = 0; iy < ny; ++iy) {
        auto v = [&](std::size_t ix) { return grid.at(ix, iy); };
        for (const auto& e : detail::local_extrema_series(nx, v)) {
            const double h = grid.xs[e.index] - grid.xs[e.index - 1];
            const double d2 = (v(e.index + 1) - 2.0 * v(e.index) + v(e.index - 1)) / (h * h);
            if (std::abs(d2) < tau) continue;
            BoundaryPoint p;
            p.coords = {grid.xs[e.index], grid.ys[iy]};
            p.coord_count = 2;
            p.kind = e.is_max ? ExtremumKind::ridge : ExtremumKind::valley;
            p.axis = SliceAxis::x;
            p.value = v(e.index);
            p.second_derivative = d2;
            out.push_back(p);
        }
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
        auto v = [&](std::size_t iy) { return grid.at(ix, iy); };
        for (const auto& e : detail::local_extrema_series(ny, v)) {
            const double h = grid.ys[e.index] - grid.ys[e.index - 1];
            const double d2 = (v(e.index + 1) - 2.0 * v(e.index) + v(e.index - 1)) / (h * h);
            if (std::abs(d2) < tau) continue;
            BoundaryPoint p;
            p.coords = {grid.xs[ix], grid.ys[e.index]};
            p.coord_count = 2;
            p.kind = e.is_max ? ExtremumKind::ridge : ExtremumKind::valley;
            p.axis = SliceAxis::y;
            p.value = v(e.index);
            p.second_derivative = d2;
            out.push_back(p);
        }
    }
    return out;
}

/// Fourth-order five-point second derivative at the center of a stencil
/// f(-2h)..f(+2h).
inline double second_derivative_5pt(std::span<const double, 5> f, double h) {
    if (!(h > 0)) throw ParameterError("second_derivative_5pt: step must be positive");
    return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

/// |d2 S_per_site / d p2| at a fixed parameter point for a family of system
/// sizes. A growing sequence signals a developing singularity; solver failure
/// at any stencil point is an error.
inline std::vector<double> singularity_growth(const SweepSpec& prototype, double point,
                                              std::span<const int> sizes, double h = 0.02) {
    if (!(h > 0)) throw ParameterError("singularity_growth: step must be positive");
    if (sizes.empty()) throw ParameterError("singularity_growth: no system sizes given");
    std::vector<double> out;
    out.reserve(sizes.size());
    for (int size : sizes) {
        SweepSpec spec = prototype;
        if (spec.model == ModelKind::ladder)
            spec.n_rungs = size;
        else
            spec.site_count = size;
        std::array<double, 5> s{};
        for (int k = -2; k <= 2; ++k) {
            const double p = point + k * h;
            const ModelSpec model = detail::model_at(spec, p, 0.0, false);
            auto basis = std::make_shared<const SectorBasis>(model.site_count, model.site_count / 2);
            const BipartitionMask mask =
                standard_bipartition(model.kind, model.site_count, spec.bipartition);
            const GroundStateResult gs = lanczos_ground_state(model, basis, spec.lanczos);
            s[k + 2] = subsystem_entropy(gs.wavefunction, mask) / mask.kept_count();
        }
        out.push_back(std::abs(second_derivative_5pt(s, h)));
    }
    return out;
}

} // namespace spinent
