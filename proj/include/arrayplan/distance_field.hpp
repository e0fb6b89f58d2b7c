#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "best_path.hpp"
#include "grid_graph.hpp"
#include "node_grid.hpp"

namespace arrayplan {

enum class PathModel { shortest_path, shortest_path_angular };

inline const char* to_string(PathModel m) {
    return m == PathModel::shortest_path ? "shortest_path" : "shortest_path_angular";
}

// d[t][l][node] = route length in meters from candidate l of array t to the
// node; NaN where no route exists (or the node is not part of the graph).
struct DistanceField {
    int node_count = 0;
    std::array<std::vector<int>, 4> candidates; // node ids per array
    std::array<std::vector<std::vector<double>>, 4> dist;
    std::string model;

    bool reachable(int t, int l, int node) const { return !std::isnan(dist[t][l][node]); }
};

inline DistanceField distance_field(const GridGraph& graph, const NodeGrid& grid,
                                    const std::array<std::vector<int>, 4>& candidates,
                                    PathModel model) {
    DistanceField f;
    f.node_count = graph.node_count;
    f.candidates = candidates;
    f.model = to_string(model);
    const bool angular = model == PathModel::shortest_path_angular;
    for (int t = 0; t < 4; ++t) {
        f.dist[t].reserve(candidates[t].size());
        for (int src : candidates[t]) {
            if (src < 0 || src >= graph.node_count || !grid.active(src))
                throw std::invalid_argument("distance_field: candidate is not an active node");
            PathResult r = best_paths(graph, src, angular);
            f.dist[t].push_back(std::move(r.dist));
        }
    }
    return f;
}

// Straight-line distances; obstacles are ignored so every node is reachable.
inline DistanceField euclidean_distance_field(const NodeGrid& grid,
                                              const std::array<std::vector<int>, 4>& candidates) {
    DistanceField f;
    f.node_count = grid.node_count();
    f.candidates = candidates;
    f.model = "euclidean";
    for (int t = 0; t < 4; ++t) {
        f.dist[t].reserve(candidates[t].size());
        for (int src : candidates[t]) {
            const Point a = grid.coord(src);
            std::vector<double> row(grid.node_count());
            for (int i = 0; i < grid.node_count(); ++i) {
                const Point b = grid.coord(i);
                const double dx = b.x - a.x, dy = b.y - a.y;
                row[i] = std::sqrt(dx * dx + dy * dy);
            }
            f.dist[t].push_back(std::move(row));
        }
    }
    return f;
}

namespace detail {

inline void put_f64(std::ofstream& out, double v) {
    static_assert(sizeof(double) == 8);
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) {
        bits = ((bits & 0x00000000000000ffULL) << 56) | ((bits & 0x000000000000ff00ULL) << 40) |
               ((bits & 0x0000000000ff0000ULL) << 24) | ((bits & 0x00000000ff000000ULL) << 8) |
               ((bits & 0x000000ff00000000ULL) >> 8) | ((bits & 0x0000ff0000000000ULL) >> 24) |
               ((bits & 0x00ff000000000000ULL) >> 40) | ((bits & 0xff00000000000000ULL) >> 56);
    }
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
}

inline double get_f64(std::ifstream& in) {
    char buf[8];
    in.read(buf, 8);
    if (!in) throw std::runtime_error("binary table: truncated record");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) {
        bits = ((bits & 0x00000000000000ffULL) << 56) | ((bits & 0x000000000000ff00ULL) << 40) |
               ((bits & 0x0000000000ff0000ULL) << 24) | ((bits & 0x00000000ff000000ULL) << 8) |
               ((bits & 0x000000ff00000000ULL) >> 8) | ((bits & 0x0000ff0000000000ULL) >> 24) |
               ((bits & 0x00ff000000000000ULL) >> 40) | ((bits & 0xff00000000000000ULL) >> 56);
    }
    return std::bit_cast<double>(bits);
}

} // namespace detail

// Flat little-endian binary: one record per (node, array, candidate), five
// 64-bit floats each: node_id, array_id, candidate_id, distance_m, reachable
// (1.0 or 0.0; distance_m is NaN when unreachable). Records are ordered by
// array, then candidate index, then node id.
inline void write_distance_field_binary(const DistanceField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < f.dist[t].size(); ++l) {
            for (int i = 0; i < f.node_count; ++i) {
                const double d = f.dist[t][l][i];
                const bool ok = !std::isnan(d);
                detail::put_f64(out, static_cast<double>(i));
                detail::put_f64(out, static_cast<double>(t));
                detail::put_f64(out, static_cast<double>(l));
                detail::put_f64(out, d);
                detail::put_f64(out, ok ? 1.0 : 0.0);
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_distance_field_csv(const DistanceField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "node_id,array_id,candidate_id,distance_m,reachable\n";
    char buf[64];
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < f.dist[t].size(); ++l) {
            for (int i = 0; i < f.node_count; ++i) {
                const double d = f.dist[t][l][i];
                const bool ok = !std::isnan(d);
                if (ok) {
                    std::snprintf(buf, sizeof(buf), "%.17g", d);
                    out << i << ',' << t << ',' << l << ',' << buf << ",1\n";
                } else {
                    out << i << ',' << t << ',' << l << ",,0\n";
                }
            }
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace arrayplan
