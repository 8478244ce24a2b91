// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0
//
// spin_ent: ground-state energy, entanglement entropy, and concurrence for
// spin-1/2 XXZ chains, dimerized chains, and two-leg XXZ ladders, plus
// parameter sweeps and entropy-extremum (phase-boundary candidate) extraction.
//
// Exit codes: 0 success, 1 parameter error, 2 numerical failure, 3 i/o error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinent/spinent.hpp"

namespace {

using namespace spinent;

SweepRange parse_range(const std::string& text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(':', start);
        const std::string field = text.substr(start, pos - start);
        const char* s = field.c_str();
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *end != '\0')
            throw ParameterError("range '" + text + "': '" + field + "' is not a number");
        parts.push_back(v);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() == 1) return {parts[0], parts[0], 1.0};
    if (parts.size() != 3)
        throw ParameterError("range '" + text + "': expected start:stop:step");
    SweepRange r{parts[0], parts[1], parts[2]};
    r.validate();
    return r;
}

ModelKind parse_model(const std::string& name) {
    if (name == "xxz") return ModelKind::chain;
    if (name == "dimer") return ModelKind::dimer;
    if (name == "ladder") return ModelKind::ladder;
    throw ParameterError("unknown model '" + name + "' (expected xxz, dimer, or ladder)");
}

BipartitionScheme parse_bipartition(const std::string& name, ModelKind kind, int block_length,
                                    std::uint64_t custom_mask) {
    if (name == "auto")
        return kind == ModelKind::ladder ? BipartitionScheme::checkerboard()
                                         : BipartitionScheme::odd_even();
    if (name == "odd_even") return BipartitionScheme::odd_even();
    if (name == "checkerboard") return BipartitionScheme::checkerboard();
    if (name == "leg") return BipartitionScheme::leg();
    if (name == "block") return BipartitionScheme::block(block_length);
    if (name == "custom") return BipartitionScheme::custom(static_cast<config_t>(custom_mask));
    throw ParameterError("unknown bipartition '" + name + "'");
}

int env_threads() {
    if (const char* env = std::getenv("SPIN_ENT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0)
            throw ParameterError("SPIN_ENT_THREADS='" + std::string(env) +
                                 "' is not a non-negative integer");
        return static_cast<int>(v);
    }
    return 1;
}

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing '" + path + "'");
}

/// Progress/summary notes go to stderr when results stream to stdout.
std::ostream& note_stream(const std::string& out_path) {
    return (out_path.empty() || out_path == "-") ? std::cerr : std::cout;
}

struct CommonOptions {
    std::uint64_t seed = 1;
    double tolerance = 1e-12;
    int max_iterations = 500;

    [[nodiscard]] LanczosConfig lanczos() const {
        LanczosConfig cfg;
        cfg.seed = seed;
        cfg.tolerance = tolerance;
        cfg.max_iterations = max_iterations;
        return cfg;
    }
    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "start-vector seed (default 1)");
        cmd->add_option("--tol", tolerance, "Lanczos eigenvalue tolerance (default 1e-12)");
        cmd->add_option("--max-iter", max_iterations, "Lanczos iteration cap (default 500)");
    }
};

struct GroundOptions {
    std::string model_name;
    int n = 8;
    int rungs = 8;
    double j = 1.0, delta = 1.0, j1 = 1.0, j2 = 1.0, jp = 1.0;
    std::string bipartition = "auto";
    int block_length = 1;
    std::uint64_t custom_mask = 0;
    std::string format = "text";
    std::string out_path;
    CommonOptions common;
};

int run_ground(const GroundOptions& opt) {
    const ModelKind kind = parse_model(opt.model_name);
    ModelSpec model;
    switch (kind) {
    case ModelKind::chain: model = build_xxz_chain(opt.n, opt.j, opt.delta); break;
    case ModelKind::dimer: model = build_dimerized_chain(opt.n, opt.j1, opt.j2); break;
    case ModelKind::ladder: model = build_ladder(opt.rungs, opt.j, opt.jp, opt.delta); break;
    }
    const BipartitionMask mask = standard_bipartition(
        kind, model.site_count,
        parse_bipartition(opt.bipartition, kind, opt.block_length, opt.custom_mask));

    auto basis = std::make_shared<const SectorBasis>(model.site_count, model.site_count / 2);
    const GroundStateResult gs = lanczos_ground_state(model, basis, opt.common.lanczos());
    const double entropy = subsystem_entropy(gs.wavefunction, mask);
    const auto labels = detail::concurrence_labels(kind);
    const auto pairs = detail::concurrence_pairs(kind, opt.rungs);
    std::vector<double> conc;
    for (const auto& [a, b] : pairs)
        conc.push_back(concurrence_wootters(two_site_rdm(gs.wavefunction, a, b)));

    std::ostringstream os;
    if (opt.format == "text" || opt.format == "json") {
        const bool js = opt.format == "json";
        auto field = [&](const std::string& key, const std::string& val, bool quote_val = false) {
            if (js)
                os << "  \"" << key << "\": " << (quote_val ? "\"" + val + "\"" : val);
            else
                os << key << "=" << val;
        };
        if (js) os << "{\n";
        field("model", opt.model_name, true);
        os << (js ? ",\n" : "\n");
        field("sites", std::to_string(model.site_count));
        os << (js ? ",\n" : "\n");
        field("energy", io::format_g12(gs.energy));
        os << (js ? ",\n" : "\n");
        field("entropy_bits", io::format_g12(entropy));
        os << (js ? ",\n" : "\n");
        field("entropy_per_site", io::format_g12(entropy / mask.kept_count()));
        os << (js ? ",\n" : "\n");
        for (std::size_t c = 0; c < labels.size(); ++c) {
            field("conc_" + labels[c], io::format_g12(conc[c]));
            os << (js ? ",\n" : "\n");
        }
        field("gap", js && std::isinf(gs.sector_gap) ? "\"inf\"" : io::format_g12(gs.sector_gap));
        os << (js ? ",\n" : "\n");
        field("degenerate", gs.degenerate_flag ? (js ? "true" : "1") : (js ? "false" : "0"));
        os << (js ? ",\n" : "\n");
        field("iterations", std::to_string(gs.iterations_used));
        os << (js ? ",\n" : "\n");
        field("residual", io::format_g12(gs.residual));
        os << "\n";
        if (js) os << "}\n";
    } else if (opt.format == "csv") {
        SweepResult res;
        res.concurrence_labels = labels;
        res.kept_sites = mask.kept_count();
        res.total_sites = model.site_count;
        ObservableRow row;
        if (kind == ModelKind::ladder) {
            res.xs = {opt.j != 0.0 ? opt.jp / opt.j : opt.jp};
            res.ys = {opt.delta};
            row.params = {res.xs[0], res.ys[0]};
            row.param_count = 2;
        } else {
            const double p = kind == ModelKind::chain ? opt.delta
                                                      : (opt.j1 != 0.0 ? opt.j2 / opt.j1 : opt.j2);
            row.params = {p, 0.0};
            row.param_count = 1;
        }
        row.energy = gs.energy;
        row.entropy_bits = entropy;
        row.entropy_per_site = entropy / mask.kept_count();
        row.concurrences = conc;
        row.sector_gap = gs.sector_gap;
        row.degenerate = gs.degenerate_flag;
        res.rows.push_back(std::move(row));
        std::ostringstream csv;
        io::write_sweep_csv(csv, res);
        os << csv.str();
    } else {
        throw ParameterError("unknown format '" + opt.format + "' (expected text, csv, or json)");
    }
    write_output(opt.out_path, os.str());
    return 0;
}

struct SweepOptions {
    std::string model_name;
    int n = 8;
    int rungs = 8;
    double j = 1.0, j1 = 1.0;
    double fixed_delta = 1.0;
    double fixed_jp = 0.0;
    std::string param_name = "auto";
    std::string range_text;
    std::string bipartition = "auto";
    int block_length = 1;
    std::uint64_t custom_mask = 0;
    int threads = -1; // -1: use SPIN_ENT_THREADS or 1
    std::string out_path;
    CommonOptions common;
};

SweepSpec sweep_spec_from(const SweepOptions& opt, bool two_d, const std::string& xrange_text = "",
                          const std::string& yrange_text = "") {
    SweepSpec spec;
    spec.model = parse_model(opt.model_name);
    spec.site_count = opt.n;
    spec.n_rungs = opt.rungs;
    spec.j = opt.j;
    spec.j1 = opt.j1;
    spec.fixed_delta = opt.fixed_delta;
    spec.fixed_jp_ratio = opt.fixed_jp;
    spec.bipartition =
        parse_bipartition(opt.bipartition, spec.model, opt.block_length, opt.custom_mask);
    spec.lanczos = opt.common.lanczos();
    spec.threads = opt.threads >= 0 ? opt.threads : env_threads();
    if (two_d) {
        // defaults mirror the usual phase-diagram window
        spec.x_range = xrange_text.empty() ? SweepRange{-4.0, 4.0, 0.1} : parse_range(xrange_text);
        spec.y_range = yrange_text.empty() ? SweepRange{-2.0, 2.0, 0.1} : parse_range(yrange_text);
        return spec;
    }
    std::string pname = opt.param_name;
    if (pname == "auto")
        pname = spec.model == ModelKind::dimer ? "j2_over_j1" : "delta";
    if (pname == "delta")
        spec.parameter = SweepParameter::delta;
    else if (pname == "j2_over_j1")
        spec.parameter = SweepParameter::j2_over_j1;
    else if (pname == "jp_over_j")
        spec.parameter = SweepParameter::jp_over_j;
    else
        throw ParameterError("unknown sweep parameter '" + pname + "'");
    if (opt.range_text.empty()) {
        if (spec.parameter == SweepParameter::delta)
            spec.range = {-2.0, 2.0, 0.05};
        else if (spec.parameter == SweepParameter::j2_over_j1)
            spec.range = {-1.0, 2.0, 0.05};
        else
            spec.range = {-4.0, 4.0, 0.05};
    } else {
        spec.range = parse_range(opt.range_text);
    }
    return spec;
}

int run_sweep(const SweepOptions& opt) {
    const SweepSpec spec = sweep_spec_from(opt, false);
    const SweepResult res = run_sweep_1d(spec);
    std::ostringstream os;
    io::write_sweep_csv(os, res);
    write_output(opt.out_path, os.str());

    std::size_t failures = 0;
    for (const auto& row : res.rows) failures += row.error.empty() ? 0 : 1;
    const auto extrema = find_local_extrema(res, "entropy_per_site");
    auto& note = note_stream(opt.out_path);
    note << "computed " << res.rows.size() << " points";
    if (failures) note << " (" << failures << " failed)";
    note << ", found " << extrema.size() << " entropy_per_site extrema\n";
    return 0;
}

struct Sweep2dOptions {
    SweepOptions base;
    std::string xrange_text, yrange_text;
};

int run_sweep2d(const Sweep2dOptions& opt) {
    SweepSpec spec = sweep_spec_from(opt.base, true, opt.xrange_text, opt.yrange_text);
    const SweepResult res = run_sweep_2d(spec);
    std::ostringstream os;
    io::write_sweep_csv(os, res);
    write_output(opt.base.out_path, os.str());

    std::size_t failures = 0;
    for (const auto& row : res.rows) failures += row.error.empty() ? 0 : 1;
    auto& note = note_stream(opt.base.out_path);
    note << "computed " << res.xs.size() << "x" << res.ys.size() << " points";
    if (failures) note << " (" << failures << " failed)";
    if (res.xs.size() >= 2 && res.ys.size() >= 2) {
        const auto ridges = extract_ridges_valleys(grid_from_sweep(res, "entropy_per_site"));
        note << ", found " << ridges.size() << " ridge/valley candidates";
    }
    note << "\n";
    return 0;
}

struct BoundaryOptions {
    std::string in_path;
    std::string out_path;
    std::string observable = "entropy_per_site";
    double threshold = 1e-4;
    bool on_derivative = false;
};

/// |grad v| on the interior of a grid, for derivative-based boundary detection.
Grid2D gradient_magnitude_grid(const Grid2D& g) {
    g.validate();
    const std::size_t nx = g.xs.size();
    const std::size_t ny = g.ys.size();
    if (nx < 3 || ny < 3)
        throw ParameterError("--on-derivative needs at least a 3x3 grid");
    Grid2D out;
    out.xs.assign(g.xs.begin() + 1, g.xs.end() - 1);
    out.ys.assign(g.ys.begin() + 1, g.ys.end() - 1);
    out.values.resize((nx - 2) * (ny - 2));
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
        const double hx = g.xs[ix + 1] - g.xs[ix - 1];
        for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
            const double hy = g.ys[iy + 1] - g.ys[iy - 1];
            const double dx = (g.at(ix + 1, iy) - g.at(ix - 1, iy)) / hx;
            const double dy = (g.at(ix, iy + 1) - g.at(ix, iy - 1)) / hy;
            out.values[(ix - 1) * (ny - 2) + (iy - 1)] = std::sqrt(dx * dx + dy * dy);
        }
    }
    return out;
}

int run_boundaries(const BoundaryOptions& opt) {
    std::ifstream in(opt.in_path);
    if (!in) throw IoError("cannot open '" + opt.in_path + "'");
    const io::ParsedCsv csv = io::read_csv(in);

    std::vector<BoundaryPoint> points;
    if (!csv.columns.empty() && csv.columns[0] == "param") {
        auto [params, values] = io::series_from_csv(csv, opt.observable);
        points = find_local_extrema(params, values);
        if (opt.on_derivative) {
            // extrema of |d obs / d param| flag inflection-driven boundaries
            if (params.size() < 3) throw ParameterError("--on-derivative needs >= 3 points");
            const double h = params[1] - params[0];
            auto deriv = central_differences(values, h, 1);
            for (double& d : deriv) d = std::abs(d);
            const std::vector<double> inner_params(params.begin() + 1, params.end() - 1);
            const auto extra = find_local_extrema(inner_params, deriv);
            points.insert(points.end(), extra.begin(), extra.end());
        }
    } else {
        const Grid2D grid = io::grid_from_csv(csv, opt.observable);
        points = extract_ridges_valleys(grid, opt.threshold);
        if (opt.on_derivative) {
            const auto extra = extract_ridges_valleys(gradient_magnitude_grid(grid), opt.threshold);
            points.insert(points.end(), extra.begin(), extra.end());
        }
    }

    std::ostringstream os;
    io::write_boundaries_json(os, points);
    write_output(opt.out_path, os.str());
    note_stream(opt.out_path) << "found " << points.size() << " boundary points\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-1/2 ground states, entanglement entropy, and phase-boundary sweeps"};
    app.require_subcommand(1);

    GroundOptions ground;
    CLI::App* cmd_ground = app.add_subcommand("ground", "solve one ground state and its observables");
    cmd_ground->add_option("--model", ground.model_name, "xxz, dimer, or ladder")->required();
    cmd_ground->add_option("--n", ground.n, "site count for xxz/dimer (default 8)");
    cmd_ground->add_option("--rungs", ground.rungs, "rung count for ladder (default 8)");
    cmd_ground->add_option("--j", ground.j, "chain or leg coupling J (default 1)");
    cmd_ground->add_option("--delta", ground.delta, "anisotropy (default 1)");
    cmd_ground->add_option("--j1", ground.j1, "dimer strong coupling (default 1)");
    cmd_ground->add_option("--j2", ground.j2, "dimer weak coupling (default 1)");
    cmd_ground->add_option("--jp", ground.jp, "ladder rung coupling J' (default 1)");
    cmd_ground->add_option("--bipartition", ground.bipartition,
                           "auto, odd_even, checkerboard, leg, block, custom");
    cmd_ground->add_option("--block-length", ground.block_length, "kept sites for block scheme");
    cmd_ground->add_option("--custom-mask", ground.custom_mask, "kept-site bitmask for custom scheme");
    cmd_ground->add_option("--format", ground.format, "text, csv, or json (default text)");
    cmd_ground->add_option("--out", ground.out_path, "output file (default stdout)");
    ground.common.attach(cmd_ground);

    SweepOptions sweep;
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one coupling parameter");
    cmd_sweep->add_option("--model", sweep.model_name, "xxz, dimer, or ladder")->required();
    cmd_sweep->add_option("--n", sweep.n, "site count for xxz/dimer (default 8)");
    cmd_sweep->add_option("--rungs", sweep.rungs, "rung count for ladder (default 8)");
    cmd_sweep->add_option("--param", sweep.param_name, "delta, j2_over_j1, or jp_over_j");
    cmd_sweep->add_option("--range", sweep.range_text,
                          "start:stop:step (defaults to the model's standard window)");
    cmd_sweep->add_option("--j", sweep.j, "chain or leg coupling J (default 1)");
    cmd_sweep->add_option("--j1", sweep.j1, "dimer strong coupling (default 1)");
    cmd_sweep->add_option("--delta", sweep.fixed_delta, "fixed anisotropy for jp_over_j sweeps");
    cmd_sweep->add_option("--jp", sweep.fixed_jp, "fixed J'/J for ladder delta sweeps (default 0)");
    cmd_sweep->add_option("--bipartition", sweep.bipartition,
                          "auto, odd_even, checkerboard, leg, block, custom");
    cmd_sweep->add_option("--block-length", sweep.block_length, "kept sites for block scheme");
    cmd_sweep->add_option("--custom-mask", sweep.custom_mask, "kept-site bitmask for custom scheme");
    cmd_sweep->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
    cmd_sweep->add_option("--out", sweep.out_path, "output CSV (default stdout)");
    sweep.common.attach(cmd_sweep);

    Sweep2dOptions sweep2d;
    sweep2d.base.model_name = "ladder";
    CLI::App* cmd_sweep2d =
        app.add_subcommand("sweep2d", "sweep the ladder (J'/J, delta) plane to a CSV grid");
    cmd_sweep2d->add_option("--model", sweep2d.base.model_name, "must be ladder");
    cmd_sweep2d->add_option("--rungs", sweep2d.base.rungs, "rung count (default 8)");
    cmd_sweep2d->add_option("--xrange", sweep2d.xrange_text, "J'/J start:stop:step (default -4:4:0.1)");
    cmd_sweep2d->add_option("--yrange", sweep2d.yrange_text, "delta start:stop:step (default -2:2:0.1)");
    cmd_sweep2d->add_option("--j", sweep2d.base.j, "leg coupling J (default 1)");
    cmd_sweep2d->add_option("--bipartition", sweep2d.base.bipartition,
                            "auto, odd_even, checkerboard, leg, block, custom");
    cmd_sweep2d->add_option("--threads", sweep2d.base.threads, "worker threads (0 = all cores)");
    cmd_sweep2d->add_option("--out", sweep2d.base.out_path, "output CSV (default stdout)");
    sweep2d.base.common.attach(cmd_sweep2d);

    BoundaryOptions bounds;
    CLI::App* cmd_bounds =
        app.add_subcommand("boundaries", "extract entropy extrema / ridges from a sweep CSV");
    cmd_bounds->add_option("--in", bounds.in_path, "input sweep CSV")->required();
    cmd_bounds->add_option("--out", bounds.out_path, "output JSON (default stdout)");
    cmd_bounds->add_option("--observable", bounds.observable,
                           "column to analyze (default entropy_per_site)");
    cmd_bounds->add_option("--threshold", bounds.threshold,
                           "2D curvature threshold tau (default 1e-4)");
    cmd_bounds->add_flag("--on-derivative", bounds.on_derivative,
                         "also extract boundaries from the derivative grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_ground->parsed()) return run_ground(ground);
        if (cmd_sweep->parsed()) return run_sweep(sweep);
        if (cmd_sweep2d->parsed()) return run_sweep2d(sweep2d);
        if (cmd_bounds->parsed()) return run_boundaries(bounds);
        throw ParameterError("no subcommand given");
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
