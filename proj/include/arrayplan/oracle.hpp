#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "best_path.hpp"
#include "grid_graph.hpp"
#include "placement.hpp"

// Brute-force reference implementations for tests. Deliberately simple and
// slow; they refuse inputs large enough to make exhaustion impractical.

namespace arrayplan {

struct OracleConfig {
    int max_grid_nodes = 25;    // nodes with arcs, for simple-path enumeration
    long max_tuples = 100000;   // placement tuples to scan
};

struct SimplePathBest {
    bool reachable = false;
    double value = -std::numeric_limits<double>::infinity();
    double value_path_length = std::numeric_limits<double>::quiet_NaN();
    double min_length = std::numeric_limits<double>::infinity();
};

namespace oracle_detail {

inline std::vector<int> reachable_set(const GridGraph& g, int source) {
    std::vector<char> seen(g.node_count, 0);
    std::vector<int> stack{source}, out;
    seen[source] = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        out.push_back(i);
        for (const Arc& a : g.neighbors(i)) {
            if (!seen[a.to]) {
                seen[a.to] = 1;
                stack.push_back(a.to);
            }
        }
    }
    return out;
}

struct ValueSearch {
    const GridGraph& g;
    double v_init;
    double min_len;
    std::vector<double> best;
    std::vector<double> best_len;
    std::vector<char> on_path;
    const std::vector<int>& reach;

    double weakest_best() const {
        double m = std::numeric_limits<double>::infinity();
        for (int n : reach) m = std::min(m, best[n]);
        return m;
    }

    void dfs(int i, double val, double plen, int last_code, int source) {
        const double ub = val >= 0.0 ? val : -min_len;
        if (ub <= weakest_best()) return;
        for (const Arc& a : g.neighbors(i)) {
            const int j = a.to;
            if (on_path[j]) continue;
            const double factor = i == source ? 1.0 : turn_factor(static_cast<std::uint8_t>(last_code), a.code);
            const double v2 = factor * val - a.length;
            const double l2 = plen + a.length;
            if (v2 > best[j] || (v2 == best[j] && l2 < best_len[j])) {
                best[j] = v2;
                best_len[j] = l2;
            }
            on_path[j] = 1;
            dfs(j, v2, l2, a.code, source);
            on_path[j] = 0;
        }
    }
};

struct LengthSearch {
    const GridGraph& g;
    std::vector<double> best;
    std::vector<char> on_path;
    const std::vector<int>& reach;

    double slackest_best() const {
        double m = -std::numeric_limits<double>::infinity();
        for (int n : reach) m = std::max(m, best[n]);
        return m;
    }

    void dfs(int i, double plen) {
        if (plen >= slackest_best()) return;
        for (const Arc& a : g.neighbors(i)) {
            const int j = a.to;
            if (on_path[j]) continue;
            const double l2 = plen + a.length;
            if (l2 < best[j]) best[j] = l2;
            on_path[j] = 1;
            dfs(j, l2);
            on_path[j] = 0;
        }
    }
};

inline void check_size(const GridGraph& g, const OracleConfig& cfg) {
    int with_arcs = 0;
    for (int i = 0; i < g.node_count; ++i) {
        if (g.offsets[i + 1] > g.offsets[i]) ++with_arcs;
    }
    if (with_arcs > cfg.max_grid_nodes)
        throw std::invalid_argument("oracle: graph too large for simple-path enumeration");
}

} // namespace oracle_detail

// Exhausts every simple path from the source, tracking per node the highest
// value under the recursion v' = factor*v - length (ties keep the shorter
// route) and separately the minimum plain length. v_init must be large
// enough that no intermediate value on an optimal path goes negative.
inline std::vector<SimplePathBest>
enumerate_simple_paths_all(const GridGraph& g, int source, double v_init = 10000.0,
                           const OracleConfig& cfg = {}) {
    oracle_detail::check_size(g, cfg);
    if (source < 0 || source >= g.node_count)
        throw std::invalid_argument("oracle: bad source id");
    const std::vector<int> reach = oracle_detail::reachable_set(g, source);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    double min_len = g.min_arc_length();
    for (const Arc& a : g.arcs) min_len = std::min(min_len, a.length);

    oracle_detail::ValueSearch vs{g, v_init, min_len,
                                  std::vector<double>(g.node_count, -kInf),
                                  std::vector<double>(g.node_count, kInf),
                                  std::vector<char>(g.node_count, 0), reach};
    vs.best[source] = v_init;
    vs.best_len[source] = 0.0;
    vs.on_path[source] = 1;
    vs.dfs(source, v_init, 0.0, -1, source);

    oracle_detail::LengthSearch ls{g, std::vector<double>(g.node_count, kInf),
                                   std::vector<char>(g.node_count, 0), reach};
    ls.best[source] = 0.0;
    ls.on_path[source] = 1;
    ls.dfs(source, 0.0);

    std::vector<SimplePathBest> out(g.node_count);
    for (int n : reach) {
        out[n].reachable = true;
        out[n].value = vs.best[n];
        out[n].value_path_length = vs.best_len[n];
        out[n].min_length = ls.best[n];
    }
    return out;
}

inline SimplePathBest enumerate_all_simple_paths(const GridGraph& g, int source, int dest,
                                                 double v_init = 10000.0,
                                                 const OracleConfig& cfg = {}) {
    if (dest < 0 || dest >= g.node_count) throw std::invalid_argument("oracle: bad destination id");
    return enumerate_simple_paths_all(g, source, v_init, cfg)[dest];
}

// Classic textbook shortest-path run (min-distance extraction), used as the
// independent reference for the penalty-off search.
inline std::vector<double> dijkstra_reference(const GridGraph& g, int source) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_count, kInf);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, i] = heap.top();
        heap.pop();
        if (d != dist[i]) continue;
        for (const Arc& a : g.neighbors(i)) {
            const double nd = d + a.length;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                heap.push({nd, a.to});
            }
        }
    }
    return dist;
}

// Scans every candidate tuple; per tuple finds the cheapest workable power
// on a dense logarithmic ladder, then pins it down exactly from the sorted
// gain sums. Agreement between the ladder bracket and the exact value is a
// built-in sanity check.
inline PlacementSolution brute_force_placement(const ProblemInstance& inst,
                                               const OracleConfig& cfg = {}) {
    validate(inst);
    if (static_cast<long>(inst.tuple_count()) > cfg.max_tuples)
        throw std::invalid_argument("oracle: too many tuples for brute force");
    const int n = static_cast<int>(inst.users.size());
    const int k = coverage_count(inst.coverage_fraction, n);
    const double p_r = inst.min_power_watts;

    constexpr int kLevels = 1000000;
    const double lo = 1e-21, hi = 1e6;
    auto level = [&](int idx) {
        return lo * std::pow(hi / lo, static_cast<double>(idx) / (kLevels - 1));
    };
    auto covered_at = [&](const std::vector<double>& g, double p) {
        int c = 0;
        for (double v : g) c += v * p >= p_r;
        return c;
    };

    double best_p = std::numeric_limits<double>::infinity();
    std::array<int, 4> best{-1, -1, -1, -1};

    const std::array<int, 4> counts = {
        static_cast<int>(inst.gain->candidate_count(0)), static_cast<int>(inst.gain->candidate_count(1)),
        static_cast<int>(inst.gain->candidate_count(2)), static_cast<int>(inst.gain->candidate_count(3))};
    std::array<int, 4> pl;
    std::vector<double> g(n), sorted(n);
    for (pl[0] = 0; pl[0] < counts[0]; ++pl[0])
    for (pl[1] = 0; pl[1] < counts[1]; ++pl[1])
    for (pl[2] = 0; pl[2] < counts[2]; ++pl[2])
    for (pl[3] = 0; pl[3] < counts[3]; ++pl[3]) {
        for (int u = 0; u < n; ++u) {
            double s = 0.0;
            for (int t = 0; t < 4; ++t) {
                const double b = inst.gain->gain[t][pl[t]][inst.users[u]];
                if (!std::isnan(b)) s += b;
            }
            g[u] = s;
        }
        int feasible = 0;
        for (double v : g) feasible += v > 0.0;
        if (feasible < k) continue;

        // cheapest ladder rung that serves enough users
        int lo_idx = 0, hi_idx = kLevels - 1;
        if (covered_at(g, level(hi_idx)) < k) continue;
        while (lo_idx < hi_idx) {
            const int mid = lo_idx + (hi_idx - lo_idx) / 2;
            if (covered_at(g, level(mid)) >= k)
                hi_idx = mid;
            else
                lo_idx = mid + 1;
        }
        const double p_grid = level(hi_idx);

        sorted = g;
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        const double p_exact = p_r / sorted[k - 1];
        if (p_exact > p_grid * (1.0 + 1e-12) || p_grid > p_exact * 1.01)
            throw std::logic_error("oracle: power ladder disagrees with exact refinement");

        if (p_exact < best_p) {
            best_p = p_exact;
            best = pl;
        }
    }
    if (best[0] < 0) throw InfeasiblePlacement("no placement can serve the required user count");

    PlacementSolution sol;
    sol.placement = best;
    sol.p_t_watts = best_p;
    sol.y = p_r / best_p;
    std::vector<double> gains(n);
    for (int u = 0; u < n; ++u) {
        double s = 0.0;
        for (int t = 0; t < 4; ++t) {
            const double b = inst.gain->gain[t][best[t]][inst.users[u]];
            if (!std::isnan(b)) s += b;
        }
        gains[u] = s;
    }
    std::vector<int> order(n);
    for (int u = 0; u < n; ++u) order[u] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (gains[a] != gains[b]) return gains[a] > gains[b];
        return inst.users[a] < inst.users[b];
    });
    sol.covered.resize(k);
    for (int u = 0; u < k; ++u) sol.covered[u] = inst.users[order[u]];
    std::sort(sol.covered.begin(), sol.covered.end());
    return sol;
}

// Binary search on the transmit power: the served count is monotone in the
// power, so the smallest workable power brackets tightly.
inline double bisection_power(const ProblemInstance& inst, const std::array<int, 4>& placement,
                              double rel_tol = 1e-12) {
    validate(inst);
    const int n = static_cast<int>(inst.users.size());
    const int k = coverage_count(inst.coverage_fraction, n);
    std::vector<double> g(n);
    for (int u = 0; u < n; ++u) {
        double s = 0.0;
        for (int t = 0; t < 4; ++t) {
            const double b = inst.gain->gain[t][placement[t]][inst.users[u]];
            if (!std::isnan(b)) s += b;
        }
        g[u] = s;
    }
    auto covered_at = [&](double p) {
        int c = 0;
        for (double v : g) c += v * p >= inst.min_power_watts;
        return c;
    };
    double lo = 1e-21, hi = 1e6;
    if (covered_at(hi) < k) throw InfeasiblePlacement("bisection: placement infeasible");
    while (hi / lo > 1.0 + rel_tol) {
        const double mid = std::sqrt(lo * hi);
        if (covered_at(mid) >= k)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace arrayplan
