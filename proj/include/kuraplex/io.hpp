#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kuraplex/composition.hpp"
#include "kuraplex/matrix.hpp"
#include "kuraplex/stability.hpp"

#include <json.hpp>

namespace kuraplex {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Write via a temp file and rename, so readers never observe partial files.
inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << contents;
        if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// --- matrices ---------------------------------------------------------------

/// Dense row-major CSV: one row per line, comma-separated decimal reals.
inline std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_real(m(i, j));
        }
        out += '\n';
    }
    return out;
}

inline Matrix matrix_from_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("matrix_from_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

/// JSON object {n_rows, n_cols, entries} with entries flattened row-major.
inline nlohmann::json matrix_to_json(const Matrix& m) {
    return {{"n_rows", m.rows()}, {"n_cols", m.cols()}, {"entries", m.entries()}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    const std::size_t rows = j.at("n_rows").get<std::size_t>();
    const std::size_t cols = j.at("n_cols").get<std::size_t>();
    const auto entries = j.at("entries").get<std::vector<double>>();
    if (entries.size() != rows * cols)
        throw std::runtime_error("matrix_from_json: entries length does not match shape");
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t jx = 0; jx < cols; ++jx) m(i, jx) = entries[i * cols + jx];
    return m;
}

// --- trajectories and order parameters --------------------------------------

/// CSV with header time, theta_0 ... theta_{n-1}; unwrapped radians at full
/// precision.
inline std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "time";
    const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
    for (std::size_t i = 0; i < n; ++i) out += ",theta_" + std::to_string(i);
    out += '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out += format_real(traj.times[k]);
        for (double v : traj.states[k]) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

inline std::string order_series_to_csv(const OrderParameterSeries& s) {
    std::string out = "time,r_full,r_composed,r_intra,r_inter\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        out += format_real(s.times[k]);
        out += ',';
        out += format_real(s.r_full[k]);
        out += ',';
        out += format_real(s.r_composed[k]);
        out += ',';
        out += format_real(s.r_intra[k]);
        out += ',';
        out += format_real(s.r_inter[k]);
        out += '\n';
    }
    return out;
}

// --- spectrum reports --------------------------------------------------------

inline nlohmann::json spectrum_report_to_json(const SpectrumReport& r) {
    return {{"eigenvalues", r.eigenvalues},
            {"zero_multiplicity", r.zero_multiplicity},
            {"classification", to_string(r.classification)},
            {"zero_tolerance", r.zero_tolerance}};
}

inline nlohmann::json composed_stability_to_json(const ComposedStabilityReport& r) {
    return {{"intra", spectrum_report_to_json(r.intra)},
            {"inter", spectrum_report_to_json(r.inter)},
            {"composed", spectrum_report_to_json(r.composed)},
            {"sumset_residual", r.sumset_residual},
            {"degenerate", r.degenerate},
            {"iff_holds", r.iff_holds}};
}

}  // namespace kuraplex
