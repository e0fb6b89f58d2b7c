#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "node_grid.hpp"

namespace arrayplan {

// Angle codes are multiples of 45 degrees counterclockwise from east:
// 0=E 1=NE 2=N 3=NW 4=W 5=SW 6=S 7=SE.
inline constexpr int kDirCol[8] = {1, 1, 0, -1, -1, -1, 0, 1};
inline constexpr int kDirRow[8] = {0, 1, 1, 1, 0, -1, -1, -1};

struct Arc {
    int to = -1;
    std::uint8_t code = 0;
    double length = 0.0;
};

struct GridGraph {
    int node_count = 0;
    double spacing = 1.0;
    std::vector<int> offsets; // CSR, size node_count + 1
    std::vector<Arc> arcs;

    std::span<const Arc> neighbors(int i) const {
        return {arcs.data() + offsets[i], arcs.data() + offsets[i + 1]};
    }
    double min_arc_length() const { return spacing; }
};

// Arcs join 8-adjacent active nodes. A diagonal is dropped when both of the
// two orthogonal nodes it squeezes between are blocked, so routes cannot
// slip through touching obstacle corners.
inline GridGraph build_graph(const NodeGrid& g) {
    GridGraph out;
    out.node_count = g.node_count();
    out.spacing = g.spacing;
    const double axial = g.spacing;
    const double diagonal = g.spacing * std::numbers::sqrt2;

    auto arc_allowed = [&](int c, int r, int code, int& j) {
        const int cc = c + kDirCol[code];
        const int rr = r + kDirRow[code];
        if (!g.in_bounds(cc, rr)) return false;
        j = g.id(cc, rr);
        if (!g.active(j)) return false;
        if ((code % 2) == 1) {
            const int s1 = g.id(cc, r);
            const int s2 = g.id(c, rr);
            if (g.state[s1] == NodeState::blocked && g.state[s2] == NodeState::blocked)
                return false;
        }
        return true;
    };

    out.offsets.assign(out.node_count + 1, 0);
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const int i = g.id(c, r);
            if (!g.active(i)) continue;
            int j;
            for (int code = 0; code < 8; ++code) {
                if (arc_allowed(c, r, code, j)) out.offsets[i + 1]++;
            }
        }
    }
    for (int i = 0; i < out.node_count; ++i) out.offsets[i + 1] += out.offsets[i];
    out.arcs.resize(out.offsets[out.node_count]);

    std::vector<int> cursor(out.offsets.begin(), out.offsets.end() - 1);
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const int i = g.id(c, r);
            if (!g.active(i)) continue;
            int j;
            for (int code = 0; code < 8; ++code) {
                if (arc_allowed(c, r, code, j)) {
                    out.arcs[cursor[i]++] = {j, static_cast<std::uint8_t>(code),
                                             (code % 2) ? diagonal : axial};
                }
            }
        }
    }
    return out;
}

} // namespace arrayplan
