#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "placement.hpp"

namespace arrayplan {

namespace detail {

inline std::string lp_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

// Writes the placement problem as a mixed-integer model in LP text format:
// maximize y subject to one chosen candidate per array, a minimum served
// count, and per-user big-M linking rows. Variables: x_<array>_<candidate>
// (binary), z_<node_id> (binary, user is served), y (continuous, the linear
// gain floor among served users). M is the largest possible gain sum over
// users, which bounds y, so unserved rows go slack. The transmit power
// follows as sensitivity / y.
inline void export_mip(const ProblemInstance& inst, const std::string& path) {
    validate(inst);
    const int n = static_cast<int>(inst.users.size());
    const int k = coverage_count(inst.coverage_fraction, n);

    double big_m = 0.0;
    for (int u = 0; u < n; ++u) {
        double sum = 0.0;
        for (int t = 0; t < 4; ++t) {
            double best = 0.0;
            for (std::size_t l = 0; l < inst.gain->candidate_count(t); ++l) {
                const double b = inst.gain->gain[t][l][inst.users[u]];
                if (!std::isnan(b) && b > best) best = b;
            }
            sum += best;
        }
        if (sum > big_m) big_m = sum;
    }
    if (!(big_m > 0.0)) throw std::invalid_argument("export_mip: all gains are zero");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    out << "Maximize\n obj: y\nSubject To\n";
    for (int t = 0; t < 4; ++t) {
        out << " assign_" << t << ":";
        for (std::size_t l = 0; l < inst.gain->candidate_count(t); ++l) {
            out << (l == 0 ? " " : " + ") << "x_" << t << "_" << l;
        }
        out << " = 1\n";
    }
    out << " cover:";
    for (int u = 0; u < n; ++u) {
        out << (u == 0 ? " " : " + ") << "z_" << inst.users[u];
    }
    out << " >= " << k << "\n";
    const std::string m_str = detail::lp_num(big_m);
    for (int u = 0; u < n; ++u) {
        const int node = inst.users[u];
        out << " serve_" << node << ":";
        bool first = true;
        for (int t = 0; t < 4; ++t) {
            for (std::size_t l = 0; l < inst.gain->candidate_count(t); ++l) {
                const double b = inst.gain->gain[t][l][node];
                if (std::isnan(b) || b == 0.0) continue;
                out << (first ? " " : " + ") << detail::lp_num(b) << " x_" << t << "_" << l;
                first = false;
            }
        }
        out << " - y - " << m_str << " z_" << node << " >= -" << m_str << "\n";
    }
    out << "Bounds\n y >= 0\nBinary\n";
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < inst.gain->candidate_count(t); ++l) {
            out << " x_" << t << "_" << l << "\n";
        }
    }
    for (int u = 0; u < n; ++u) out << " z_" << inst.users[u] << "\n";
    out << "End\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace arrayplan
