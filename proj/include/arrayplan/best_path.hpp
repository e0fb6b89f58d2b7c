#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "grid_graph.hpp"

namespace arrayplan {

struct PathResult {
    int source = -1;
    std::vector<double> dist;  // meters along the chosen route; NaN when unset
    std::vector<int> prev;     // -1 when unset
    std::vector<double> v;     // remaining path value; -inf when unreached
    long rescale_count = 0;
};

// Turn factor between an incoming and an outgoing direction code: 1 for
// straight ahead, down to 0 for a full U-turn, linear in the 45-degree steps.
inline double turn_factor(std::uint8_t incoming, std::uint8_t outgoing) {
    int delta = incoming > outgoing ? incoming - outgoing : outgoing - incoming;
    int wrapped = delta <= 8 - delta ? delta : 8 - delta;
    return (4 - wrapped) / 4.0;
}

namespace detail {

inline std::uint8_t arc_code(const GridGraph& g, int from, int to) {
    for (const Arc& a : g.neighbors(from)) {
        if (a.to == to) return a.code;
    }
    throw std::logic_error("arc_code: no arc between the given nodes");
}

} // namespace detail

// Factor applied when stepping from i to j given how i was reached. The
// first hop out of the source has no incoming direction and costs nothing.
inline double angular_factor(const GridGraph& g, int source, int i, int j,
                             const std::vector<int>& prev) {
    if (i == source) return 1.0;
    if (prev[i] < 0) throw std::logic_error("angular_factor: node has no predecessor");
    return turn_factor(detail::arc_code(g, prev[i], i), detail::arc_code(g, i, j));
}

// Value-propagating search: starts the source at v_init, extracts the
// highest-value node (smallest id on ties), and relaxes alt = factor*v - len.
// A relaxation that would store a negative value instead lifts every finite
// value by v_init and requeues the current node, so stored values stay >= 0.
// Values are kept as norm[] relative to a running offset; a lift is then a
// single offset bump, which preserves the relative order of all finite
// values exactly and keeps previously pushed heap keys comparable.
inline PathResult best_paths(const GridGraph& g, int source, bool use_angular_penalty,
                             double v_init = 10000.0, long rescale_cap = 1000000) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    const int n = g.node_count;
    if (source < 0 || source >= n) throw std::invalid_argument("best_paths: bad source id");

    PathResult res;
    res.source = source;
    res.dist.assign(n, std::numeric_limits<double>::quiet_NaN());
    res.prev.assign(n, -1);

    std::vector<double> norm(n, kNegInf);
    std::vector<std::uint8_t> in_code(n, 255);
    std::vector<char> in_queue(n, 0);
    double offset = 0.0;

    struct Entry {
        double key;
        int node;
        bool operator<(const Entry& o) const {
            return key < o.key || (key == o.key && node > o.node);
        }
    };
    std::priority_queue<Entry> queue;

    norm[source] = v_init;
    res.dist[source] = 0.0;
    in_queue[source] = 1;
    queue.push({v_init, source});

    while (!queue.empty()) {
        const Entry top = queue.top();
        queue.pop();
        const int i = top.node;
        if (!in_queue[i] || top.key != norm[i]) continue; // superseded entry
        in_queue[i] = 0;

        const double v_i = norm[i] + offset;
        for (const Arc& arc : g.neighbors(i)) {
            const int j = arc.to;
            double factor = 1.0;
            if (use_angular_penalty && i != source) factor = turn_factor(in_code[i], arc.code);
            const double alt = factor * v_i - arc.length;
            const double v_j = norm[j] == kNegInf ? kNegInf : norm[j] + offset;
            if (alt > v_j) {
                if (alt < 0.0) {
                    if (++res.rescale_count > rescale_cap)
                        throw std::runtime_error("best_paths: rescale divergence");
                    in_queue[i] = 1;
                    queue.push({norm[i], i});
                    offset += v_init;
                    break;
                }
                norm[j] = alt - offset;
                res.prev[j] = i;
                in_code[j] = arc.code;
                res.dist[j] = res.dist[i] + arc.length;
                in_queue[j] = 1;
                queue.push({norm[j], j});
            }
        }
    }

    res.v.assign(n, kNegInf);
    for (int k = 0; k < n; ++k) {
        if (norm[k] != kNegInf) res.v[k] = norm[k] + offset;
    }
    return res;
}

} // namespace arrayplan
