#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "environment.hpp"
#include "geometry.hpp"

namespace arrayplan {

enum class NodeState : std::uint8_t { active, blocked, removed };

// Lattice of points spaced grid_spacing apart, row-major ids (id = row*cols + col).
struct NodeGrid {
    int cols = 0;
    int rows = 0;
    double spacing = 1.0;
    double width = 0.0;
    double height = 0.0;
    std::vector<NodeState> state;
    std::vector<std::uint8_t> edge;        // on the region boundary
    std::vector<std::uint8_t> near_object; // 8-adjacent to a blocked node

    int node_count() const { return cols * rows; }
    int id(int c, int r) const { return r * cols + c; }
    int col(int id) const { return id % cols; }
    int row(int id) const { return id / cols; }
    Point coord(int id) const { return {col(id) * spacing, row(id) * spacing}; }
    bool active(int id) const { return state[id] == NodeState::active; }
    bool in_bounds(int c, int r) const { return c >= 0 && c < cols && r >= 0 && r < rows; }
};

inline NodeGrid rasterize(const Environment& env) {
    validate(env);
    NodeGrid g;
    g.spacing = env.grid_spacing;
    g.width = env.width;
    g.height = env.height;
    g.cols = static_cast<int>(std::floor(env.width / env.grid_spacing + 1e-9)) + 1;
    g.rows = static_cast<int>(std::floor(env.height / env.grid_spacing + 1e-9)) + 1;
    const int n = g.node_count();
    g.state.assign(n, NodeState::active);
    g.edge.assign(n, 0);
    g.near_object.assign(n, 0);
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const int i = g.id(c, r);
            const Point p = g.coord(i);
            for (const Polygon& poly : env.obstacles) {
                if (point_in_polygon(p, poly)) {
                    g.state[i] = NodeState::blocked;
                    break;
                }
            }
            if (c == 0 || c == g.cols - 1 || r == 0 || r == g.rows - 1) g.edge[i] = 1;
        }
    }
    static const int dc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int dr[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const int i = g.id(c, r);
            if (g.state[i] == NodeState::blocked) continue;
            for (int k = 0; k < 8; ++k) {
                int cc = c + dc[k], rr = r + dr[k];
                if (g.in_bounds(cc, rr) && g.state[g.id(cc, rr)] == NodeState::blocked) {
                    g.near_object[i] = 1;
                    break;
                }
            }
        }
    }
    return g;
}

// Flood-fill (8-connected) from the active boundary nodes; unreached active
// nodes are pockets with no way in and get removed.
inline void prune_enclosed(NodeGrid& g) {
    const int n = g.node_count();
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
        if (g.edge[i] && g.state[i] == NodeState::active) {
            seen[i] = 1;
            stack.push_back(i);
        }
    }
    if (stack.empty()) throw std::runtime_error("cell has no accessible boundary");
    static const int dc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int dr[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        int c = g.col(i), r = g.row(i);
        for (int k = 0; k < 8; ++k) {
            int cc = c + dc[k], rr = r + dr[k];
            if (!g.in_bounds(cc, rr)) continue;
            int j = g.id(cc, rr);
            if (!seen[j] && g.state[j] == NodeState::active) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (g.state[i] == NodeState::active && !seen[i]) g.state[i] = NodeState::removed;
    }
}

// User locations kept for the optimization: active nodes on the region
// boundary or right next to an obstacle. Sorted by node id.
inline std::vector<int> simplify_cell(const NodeGrid& g) {
    std::vector<int> out;
    const int n = g.node_count();
    for (int i = 0; i < n; ++i) {
        if (g.state[i] == NodeState::active && (g.edge[i] || g.near_object[i])) out.push_back(i);
    }
    return out;
}

namespace detail {

inline long round_half_away(double x) {
    return static_cast<long>(std::round(x)); // std::round is half-away-from-zero
}

} // namespace detail

// One candidate list per region edge: 0 = bottom, 1 = right, 2 = top,
// 3 = left, each parameterized from its low-coordinate end. A ratio maps to
// the nearest lattice position along the edge; blocked/removed nodes are
// skipped and duplicates after rounding keep their first occurrence.
inline std::array<std::vector<int>, 4>
candidate_locations(const NodeGrid& g, const std::vector<double>& ratios) {
    for (std::size_t k = 0; k + 1 < ratios.size(); ++k) {
        if (ratios[k] > ratios[k + 1])
            throw std::invalid_argument("candidate_locations: ratios must be sorted ascending");
    }
    for (double r : ratios) {
        if (r < 0.0 || r > 1.0)
            throw std::invalid_argument("candidate_locations: ratios must lie in [0, 1]");
    }
    std::array<std::vector<int>, 4> lists;
    const int cmax = g.cols - 1, rmax = g.rows - 1;
    for (int t = 0; t < 4; ++t) {
        const bool horizontal = (t == 0 || t == 2);
        const long steps = horizontal ? cmax : rmax;
        for (double ratio : ratios) {
            long k = detail::round_half_away(ratio * static_cast<double>(steps));
            if (k < 0) k = 0;
            if (k > steps) k = steps;
            int node;
            switch (t) {
                case 0: node = g.id(static_cast<int>(k), 0); break;
                case 1: node = g.id(cmax, static_cast<int>(k)); break;
                case 2: node = g.id(static_cast<int>(k), rmax); break;
                default: node = g.id(0, static_cast<int>(k)); break;
            }
            if (g.state[node] != NodeState::active) continue;
            bool dup = false;
            for (int existing : lists[t]) {
                if (existing == node) { dup = true; break; }
            }
            if (!dup) lists[t].push_back(node);
        }
        if (lists[t].empty())
            throw std::runtime_error("candidate_locations: edge fully blocked");
    }
    return lists;
}

} // namespace arrayplan
