#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gain_table.hpp"
#include "radio.hpp"

namespace arrayplan {

struct InfeasiblePlacement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemInstance {
    const GainMatrix* gain = nullptr;
    std::vector<int> users;          // node ids, sorted ascending
    double coverage_fraction = 1.0;  // share of users that must be served
    double min_power_watts = 0.0;    // receiver sensitivity

    std::size_t tuple_count() const {
        std::size_t n = 1;
        for (int t = 0; t < 4; ++t) n *= gain->candidate_count(t);
        return n;
    }
};

inline void validate(const ProblemInstance& inst) {
    if (!inst.gain) throw std::invalid_argument("placement: gain matrix missing");
    if (inst.users.empty()) throw std::invalid_argument("placement: empty user set");
    if (!(inst.coverage_fraction > 0.0) || inst.coverage_fraction > 1.0)
        throw std::invalid_argument("placement: coverage fraction must lie in (0, 1]");
    if (!(inst.min_power_watts > 0.0))
        throw std::invalid_argument("placement: receiver sensitivity must be positive");
    for (int t = 0; t < 4; ++t) {
        if (inst.gain->candidate_count(t) == 0)
            throw std::invalid_argument("placement: array has no candidates");
    }
}

// Number of users that must be served: the ceiling of fraction*count, with a
// small slack so products that are exact in decimal (0.9*400 = 360) do not
// round up through binary floating point.
inline int coverage_count(double fraction, int user_count) {
    int k = static_cast<int>(std::ceil(fraction * static_cast<double>(user_count) - 1e-9));
    if (k < 1) k = 1;
    if (k > user_count) k = user_count;
    return k;
}

struct PlacementSolution {
    std::array<int, 4> placement{-1, -1, -1, -1}; // candidate index per array
    double p_t_watts = 0.0;
    double y = 0.0;             // min_power / p_t
    std::vector<int> covered;   // node ids, exactly the served count
};

namespace detail {

// Gain sums for one placement over the user list; unreachable entries add 0.
inline void gain_sums(const ProblemInstance& inst, const std::array<int, 4>& placement,
                      std::vector<double>& g) {
    const std::size_t n = inst.users.size();
    g.assign(n, 0.0);
    for (int t = 0; t < 4; ++t) {
        const std::vector<double>& row = inst.gain->gain[t][placement[t]];
        for (std::size_t u = 0; u < n; ++u) {
            const double b = row[inst.users[u]];
            if (!std::isnan(b)) g[u] += b;
        }
    }
}

// K-th largest entry (1-based), selection without full sort; reorders values.
inline double kth_largest(std::vector<double>& values, int k) {
    std::nth_element(values.begin(), values.begin() + (k - 1), values.end(),
                     std::greater<double>());
    return values[k - 1];
}

} // namespace detail

// Lowest per-array transmit power that serves the required share of users,
// plus the served nodes (the strongest ones; ties favor the smaller node id).
inline std::pair<double, std::vector<int>>
evaluate_placement(const ProblemInstance& inst, const std::array<int, 4>& placement) {
    validate(inst);
    for (int t = 0; t < 4; ++t) {
        if (placement[t] < 0 ||
            static_cast<std::size_t>(placement[t]) >= inst.gain->candidate_count(t))
            throw std::invalid_argument("placement: candidate index out of range");
    }
    const int n = static_cast<int>(inst.users.size());
    const int k = coverage_count(inst.coverage_fraction, n);

    std::vector<double> g;
    detail::gain_sums(inst, placement, g);

    int positive = 0;
    for (double v : g) positive += v > 0.0;
    if (positive < k)
        throw InfeasiblePlacement("placement cannot serve the required user count");

    std::vector<int> order(n);
    for (int u = 0; u < n; ++u) order[u] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g[a] != g[b]) return g[a] > g[b];
        return inst.users[a] < inst.users[b];
    });
    const double g_k = g[order[k - 1]];
    std::vector<int> covered(k);
    for (int u = 0; u < k; ++u) covered[u] = inst.users[order[u]];
    std::sort(covered.begin(), covered.end());
    return {inst.min_power_watts / g_k, std::move(covered)};
}

// Exhaustive scan over every candidate tuple in lexicographic order, keeping
// the first tuple that strictly raises the decisive gain (so ties resolve to
// the lexicographically smallest placement).
inline PlacementSolution solve_by_enumeration(const ProblemInstance& inst) {
    validate(inst);
    const int n = static_cast<int>(inst.users.size());
    const int k = coverage_count(inst.coverage_fraction, n);

    const std::array<std::size_t, 4> counts = {
        inst.gain->candidate_count(0), inst.gain->candidate_count(1),
        inst.gain->candidate_count(2), inst.gain->candidate_count(3)};

    std::vector<double> g(n);
    std::vector<double> scratch(n);
    double best_gk = -1.0;
    std::array<int, 4> best{-1, -1, -1, -1};

    std::array<int, 4> pl{0, 0, 0, 0};
    for (pl[0] = 0; pl[0] < static_cast<int>(counts[0]); ++pl[0]) {
        for (pl[1] = 0; pl[1] < static_cast<int>(counts[1]); ++pl[1]) {
            for (pl[2] = 0; pl[2] < static_cast<int>(counts[2]); ++pl[2]) {
                for (pl[3] = 0; pl[3] < static_cast<int>(counts[3]); ++pl[3]) {
                    detail::gain_sums(inst, pl, g);
                    scratch = g;
                    const double gk = detail::kth_largest(scratch, k);
                    if (gk > 0.0 && gk > best_gk) {
                        best_gk = gk;
                        best = pl;
                    }
                }
            }
        }
    }
    if (best[0] < 0) throw InfeasiblePlacement("no placement can serve the required user count");

    PlacementSolution sol;
    sol.placement = best;
    auto [p, covered] = evaluate_placement(inst, best);
    sol.p_t_watts = p;
    sol.y = inst.min_power_watts / p;
    sol.covered = std::move(covered);
    return sol;
}

struct SweepRow {
    double coverage_fraction = 0.0;
    std::array<int, 4> placement{-1, -1, -1, -1};
    double p_t_watts = 0.0;
    double p_t_dbm = 0.0;
    int covered_count = 0;
};

// Re-solves the instance at each coverage level; levels must come sorted
// from the strictest (highest) down.
inline std::vector<SweepRow> sweep_coverage(const ProblemInstance& base,
                                            const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("sweep_coverage: no levels");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        if (levels[i] < levels[i + 1])
            throw std::invalid_argument("sweep_coverage: levels must be sorted descending");
    }
    std::vector<SweepRow> rows;
    rows.reserve(levels.size());
    for (double vs : levels) {
        ProblemInstance inst = base;
        inst.coverage_fraction = vs;
        PlacementSolution sol = solve_by_enumeration(inst);
        SweepRow row;
        row.coverage_fraction = vs;
        row.placement = sol.placement;
        row.p_t_watts = sol.p_t_watts;
        row.p_t_dbm = watts_to_dbm(sol.p_t_watts);
        row.covered_count = static_cast<int>(sol.covered.size());
        rows.push_back(row);
    }
    return rows;
}

} // namespace arrayplan
