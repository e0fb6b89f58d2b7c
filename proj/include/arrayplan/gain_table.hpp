#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "distance_field.hpp"
#include "radio.hpp"

namespace arrayplan {

// gain[t][l][node] = linear channel gain; NaN marks an unreachable entry,
// which contributes nothing to any power sum downstream.
struct GainMatrix {
    int node_count = 0;
    std::array<std::vector<int>, 4> candidates;
    std::array<std::vector<std::vector<double>>, 4> gain;
    std::string provenance;

    bool reachable(int t, int l, int node) const { return !std::isnan(gain[t][l][node]); }
    std::size_t candidate_count(int t) const { return gain[t].size(); }
};

inline GainMatrix gains_from_distances(const DistanceField& f, const RadioConfig& cfg) {
    validate(cfg);
    GainMatrix m;
    m.node_count = f.node_count;
    m.candidates = f.candidates;
    m.provenance = f.model;
    for (int t = 0; t < 4; ++t) {
        m.gain[t].reserve(f.dist[t].size());
        for (const std::vector<double>& row : f.dist[t]) {
            std::vector<double> g(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                g[i] = std::isnan(row[i]) ? std::numeric_limits<double>::quiet_NaN()
                                          : free_space_gain(row[i], cfg);
            }
            m.gain[t].push_back(std::move(g));
        }
    }
    return m;
}

// Same record scheme as the distance table, with the distance column
// replaced by the gain in linear and dB form: node_id, array_id,
// candidate_id, gain_linear, gain_db, reachable. Six 64-bit floats each.
inline void write_gain_matrix_binary(const GainMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < m.gain[t].size(); ++l) {
            for (int i = 0; i < m.node_count; ++i) {
                const double g = m.gain[t][l][i];
                const bool ok = !std::isnan(g);
                detail::put_f64(out, static_cast<double>(i));
                detail::put_f64(out, static_cast<double>(t));
                detail::put_f64(out, static_cast<double>(l));
                detail::put_f64(out, g);
                detail::put_f64(out, ok ? 10.0 * std::log10(g) : g);
                detail::put_f64(out, ok ? 1.0 : 0.0);
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_gain_matrix_csv(const GainMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "node_id,array_id,candidate_id,gain_linear,gain_db,reachable\n";
    char buf[64];
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < m.gain[t].size(); ++l) {
            for (int i = 0; i < m.node_count; ++i) {
                const double g = m.gain[t][l][i];
                if (!std::isnan(g)) {
                    out << i << ',' << t << ',' << l << ',';
                    std::snprintf(buf, sizeof(buf), "%.17g", g);
                    out << buf << ',';
                    std::snprintf(buf, sizeof(buf), "%.17g", 10.0 * std::log10(g));
                    out << buf << ",1\n";
                } else {
                    out << i << ',' << t << ',' << l << ",,,0\n";
                }
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Reads the binary record stream back; candidate node ids are not stored in
// the file, so the caller supplies the candidate lists the table was built
// for (shape is validated against the records).
inline GainMatrix read_gain_matrix_binary(const std::string& path,
                                          const std::array<std::vector<int>, 4>& candidates,
                                          int node_count) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open gain table: " + path);
    GainMatrix m;
    m.node_count = node_count;
    m.candidates = candidates;
    m.provenance = "file:" + path;
    for (int t = 0; t < 4; ++t) {
        m.gain[t].assign(candidates[t].size(),
                         std::vector<double>(node_count, std::numeric_limits<double>::quiet_NaN()));
    }
    while (in.peek() != std::ifstream::traits_type::eof()) {
        const double fid = detail::get_f64(in);
        const double fat = detail::get_f64(in);
        const double fl = detail::get_f64(in);
        const double g = detail::get_f64(in);
        detail::get_f64(in); // gain_db, redundant with the linear column
        const double ok = detail::get_f64(in);
        const int i = static_cast<int>(fid);
        const int t = static_cast<int>(fat);
        const int l = static_cast<int>(fl);
        if (t < 0 || t >= 4 || i < 0 || i >= node_count || l < 0 ||
            static_cast<std::size_t>(l) >= candidates[t].size())
            throw std::runtime_error("gain table " + path + ": record out of range for this grid");
        if (ok != 0.0) m.gain[t][l][i] = g;
    }
    return m;
}

} // namespace arrayplan
