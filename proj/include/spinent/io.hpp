// Copyright 2026 The SpinEnt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "spinent/errors.hpp"
#include "spinent/sweep.hpp"

namespace spinent::io {

/// All numeric output goes through one formatter: %.12g, LF line endings.
/// Identical inputs therefore produce byte-identical files.
inline std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline const char* kind_name(ExtremumKind k) {
    switch (k) {
    case ExtremumKind::maximum: return "max";
    case ExtremumKind::minimum: return "min";
    case ExtremumKind::ridge: return "ridge";
    case ExtremumKind::valley: return "valley";
    }
    return "?";
}

inline const char* axis_name(SliceAxis a) {
    switch (a) {
    case SliceAxis::none: return "none";
    case SliceAxis::x: return "x";
    case SliceAxis::y: return "y";
    }
    return "?";
}

/// CSV schema. 1D: param,energy,entropy_bits,entropy_per_site,conc_*,gap,degenerate
///            2D: jp_over_j,delta,energy,... (same tail)
/// Failed rows keep the schema with nan numeric fields.
inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    const bool two_d = !res.xs.empty();
    os << (two_d ? "jp_over_j,delta" : "param");
    os << ",energy,entropy_bits,entropy_per_site";
    for (const auto& label : res.concurrence_labels) os << ",conc_" << label;
    os << ",gap,degenerate\n";
    for (const auto& row : res.rows) {
        os << format_g12(row.params[0]);
        if (two_d) os << ',' << format_g12(row.params[1]);
        os << ',' << format_g12(row.energy);
        os << ',' << format_g12(row.entropy_bits);
        os << ',' << format_g12(row.entropy_per_site);
        for (double c : row.concurrences) os << ',' << format_g12(c);
        os << ',' << format_g12(row.sector_gap);
        os << ',' << (row.degenerate ? 1 : 0);
        os << '\n';
    }
}

struct ParsedCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw IoError("csv: missing column '" + name + "'");
    }
};

/// Strict numeric CSV reader for files this tool wrote: comma separated, one
/// header line, every data field a double. Errors carry 1-based line numbers.
inline ParsedCsv read_csv(std::istream& is) {
    ParsedCsv out;
    std::string line;
    std::size_t lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = s.find(',', start);
            fields.push_back(s.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return fields;
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (out.columns.empty()) {
            out.columns = std::move(fields);
            continue;
        }
        if (fields.size() != out.columns.size())
            throw IoError("csv line " + std::to_string(lineno) + ": expected " +
                          std::to_string(out.columns.size()) + " fields, got " +
                          std::to_string(fields.size()));
        std::vector<double> row(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const char* s = fields[i].c_str();
            char* end = nullptr;
            row[i] = std::strtod(s, &end);
            if (end == s || *end != '\0')
                throw IoError("csv line " + std::to_string(lineno) + ": field '" + fields[i] +
                              "' is not a number");
        }
        out.rows.push_back(std::move(row));
    }
    if (out.columns.empty()) throw IoError("csv: empty input");
    return out;
}

/// Reassembles a row-major complete 2D grid from a parsed sweep CSV.
/// Incomplete or out-of-order grids are rejected with the offending line.
inline Grid2D grid_from_csv(const ParsedCsv& csv, const std::string& value_column) {
    const std::size_t cx = csv.column_index("jp_over_j");
    const std::size_t cy = csv.column_index("delta");
    const std::size_t cv = csv.column_index(value_column);
    if (csv.rows.empty()) throw IoError("csv: no data rows");

    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };

    Grid2D g;
    const double x0 = csv.rows[0][cx];
    std::size_t ny = 0;
    while (ny < csv.rows.size() && close(csv.rows[ny][cx], x0)) {
        g.ys.push_back(csv.rows[ny][cy]);
        ++ny;
    }
    if (ny == 0 || csv.rows.size() % ny != 0)
        throw IoError("csv: rows do not form a complete row-major grid");
    const std::size_t nx = csv.rows.size() / ny;
    for (std::size_t ix = 0; ix < nx; ++ix) g.xs.push_back(csv.rows[ix * ny][cx]);

    g.values.resize(nx * ny);
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t r = ix * ny + iy;
            const auto& row = csv.rows[r];
            if (!close(row[cx], g.xs[ix]) || !close(row[cy], g.ys[iy]))
                throw IoError("csv line " + std::to_string(r + 2) +
                              ": grid is not row-major complete (x outer, delta inner)");
            g.values[r] = row[cv];
        }
    }
    g.validate();
    return g;
}

/// 1D sweep series (params ascending) from a parsed sweep CSV.
inline std::pair<std::vector<double>, std::vector<double>>
series_from_csv(const ParsedCsv& csv, const std::string& value_column) {
    const std::size_t cp = csv.column_index("param");
    const std::size_t cv = csv.column_index(value_column);
    if (csv.rows.empty()) throw IoError("csv: no data rows");
    std::pair<std::vector<double>, std::vector<double>> out;
    for (std::size_t r = 0; r < csv.rows.size(); ++r) {
        out.first.push_back(csv.rows[r][cp]);
        out.second.push_back(csv.rows[r][cv]);
        if (r > 0 && !(out.first[r] > out.first[r - 1]))
            throw IoError("csv line " + std::to_string(r + 2) + ": param values must ascend");
    }
    return out;
}

inline void write_boundaries_json(std::ostream& os, std::span<const BoundaryPoint> points) {
    os << "[\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        os << "  {\"coords\": [" << format_g12(p.coords[0]);
        if (p.coord_count == 2) os << ", " << format_g12(p.coords[1]);
        os << "], \"kind\": \"" << kind_name(p.kind) << "\", \"axis\": \"" << axis_name(p.axis)
           << "\", \"value\": " << format_g12(p.value) << ", \"second_derivative\": "
           << format_g12(p.second_derivative) << "}";
        os << (i + 1 < points.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

} // namespace spinent::io
