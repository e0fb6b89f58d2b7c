#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <arrayplan/best_path.hpp>
#include <arrayplan/distance_field.hpp>
#include <arrayplan/environment.hpp>
#include <arrayplan/grid_graph.hpp>
#include <arrayplan/node_grid.hpp>
#include <arrayplan/oracle.hpp>

using namespace arrayplan;

namespace {

NodeGrid make_grid(int cols, int rows, const std::vector<int>& blocked = {}) {
    NodeGrid g;
    g.cols = cols;
    g.rows = rows;
    g.spacing = 1.0;
    g.width = cols - 1;
    g.height = rows - 1;
    g.state.assign(cols * rows, NodeState::active);
    g.edge.assign(cols * rows, 0);
    g.near_object.assign(cols * rows, 0);
    for (int b : blocked) g.state[b] = NodeState::blocked;
    return g;
}

double octile(double dx, double dy) {
    dx = std::abs(dx);
    dy = std::abs(dy);
    const double d = std::min(dx, dy);
    return d * std::numbers::sqrt2 + (std::max(dx, dy) - d);
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
    return std::abs(a - b) / scale;
}

} // namespace

TEST_CASE("graph arcs on the open 3x3 grid") {
    const NodeGrid g = make_grid(3, 3);
    const GridGraph graph = build_graph(g);
    CHECK(graph.neighbors(g.id(1, 1)).size() == 8);
    CHECK(graph.neighbors(g.id(0, 0)).size() == 3);
    CHECK(graph.neighbors(g.id(1, 0)).size() == 5);
    CHECK(graph.arcs.size() == 40);

    for (const Arc& a : graph.neighbors(g.id(0, 0))) {
        if (a.to == g.id(1, 1)) {
            CHECK(a.code == 1);
            CHECK(a.length == std::numbers::sqrt2);
        }
        if (a.to == g.id(1, 0)) {
            CHECK(a.code == 0);
            CHECK(a.length == 1.0);
        }
    }
}

TEST_CASE("reverse arcs carry the opposite code") {
    const NodeGrid g = make_grid(4, 3, {5});
    const GridGraph graph = build_graph(g);
    for (int i = 0; i < graph.node_count; ++i) {
        for (const Arc& a : graph.neighbors(i)) {
            bool found = false;
            for (const Arc& back : graph.neighbors(a.to)) {
                if (back.to == i) {
                    CHECK(back.code == (a.code + 4) % 8);
                    CHECK(back.length == a.length);
                    found = true;
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("blocked center strips the corner diagonals") {
    const NodeGrid g = make_grid(3, 3, {4});
    const GridGraph graph = build_graph(g);
    CHECK(graph.neighbors(g.id(1, 1)).empty());
    CHECK(graph.neighbors(g.id(0, 0)).size() == 2);
    CHECK(graph.neighbors(g.id(2, 2)).size() == 2);
    for (const Arc& a : graph.arcs) CHECK(a.to != g.id(1, 1));
}

TEST_CASE("diagonal survives unless both shared neighbors are blocked") {
    // shared neighbors of the (0,0)-(1,1) diagonal are (1,0) and (0,1)
    {
        const NodeGrid g = make_grid(3, 3, {1, 3});
        const GridGraph graph = build_graph(g);
        for (const Arc& a : graph.neighbors(0)) CHECK(a.to != 4);
    }
    {
        const NodeGrid g = make_grid(3, 3, {1});
        const GridGraph graph = build_graph(g);
        bool diag = false;
        for (const Arc& a : graph.neighbors(0)) diag = diag || a.to == 4;
        CHECK(diag);
    }
    {
        // removed neighbors do not trigger the corner rule
        NodeGrid g = make_grid(3, 3);
        g.state[1] = NodeState::removed;
        g.state[3] = NodeState::removed;
        const GridGraph graph = build_graph(g);
        bool diag = false;
        for (const Arc& a : graph.neighbors(0)) diag = diag || a.to == 4;
        CHECK(diag);
    }
}

TEST_CASE("turn factor anchors") {
    for (int c = 0; c < 8; ++c) {
        const auto code = static_cast<std::uint8_t>(c);
        CHECK(turn_factor(code, code) == 1.0);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 4) % 8)) == 0.0);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 2) % 8)) == 0.5);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 6) % 8)) == 0.5);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 1) % 8)) == 0.75);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 3) % 8)) == 0.25);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 5) % 8)) == 0.25);
        CHECK(turn_factor(code, static_cast<std::uint8_t>((c + 7) % 8)) == 0.75);
    }
    CHECK(turn_factor(7, 1) == 0.5); // wrapped difference of 2 codes = 90 degrees
}

TEST_CASE("angular factor at and after the source") {
    const NodeGrid g = make_grid(3, 1);
    const GridGraph graph = build_graph(g);
    std::vector<int> prev(3, -1);
    CHECK(angular_factor(graph, 0, 0, 1, prev) == 1.0);
    CHECK_THROWS_AS(angular_factor(graph, 0, 1, 2, prev), std::logic_error);
    prev[1] = 0;
    CHECK(angular_factor(graph, 0, 1, 2, prev) == 1.0);  // straight east
    CHECK(angular_factor(graph, 0, 1, 0, prev) == 0.0);  // full reversal
}

TEST_CASE("plain search matches the octile metric on an open grid") {
    const NodeGrid g = make_grid(8, 8);
    const GridGraph graph = build_graph(g);
    const PathResult r = best_paths(graph, g.id(0, 0), false);
    CHECK(r.dist[g.id(0, 0)] == 0.0);
    CHECK(r.prev[g.id(0, 0)] == -1);
    CHECK(rel_diff(r.dist[g.id(3, 4)], 3 * std::numbers::sqrt2 + 1) < 1e-12);
    for (int c = 0; c < 8; ++c) {
        for (int rr = 0; rr < 8; ++rr) {
            CHECK(rel_diff(r.dist[g.id(c, rr)], octile(c, rr)) < 1e-12);
        }
    }
}

TEST_CASE("angular search keeps straight diagonals") {
    const NodeGrid g = make_grid(6, 6);
    const GridGraph graph = build_graph(g);
    const PathResult plain = best_paths(graph, 0, false);
    const PathResult ang = best_paths(graph, 0, true);
    for (int k = 1; k < 6; ++k) {
        const int node = g.id(k, k);
        CHECK(rel_diff(plain.dist[node], k * std::numbers::sqrt2) < 1e-12);
        CHECK(rel_diff(ang.dist[node], k * std::numbers::sqrt2) < 1e-12);
    }
}

TEST_CASE("wall forces the detour the oracle finds") {
    // vertical wall x=2 for y in [0,3]
    const NodeGrid g = make_grid(5, 5, {2, 7, 12, 17});
    const GridGraph graph = build_graph(g);
    const int src = g.id(0, 0), dst = g.id(4, 0);
    const PathResult r = best_paths(graph, src, false);
    CHECK(r.dist[dst] > 4.0);
    const SimplePathBest o = enumerate_all_simple_paths(graph, src, dst);
    REQUIRE(o.reachable);
    CHECK(rel_diff(r.dist[dst], o.min_length) < 1e-9);
}

TEST_CASE("plain search equals the textbook reference on random grids") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 15; ++trial) {
        const int cols = 6 + static_cast<int>(rng() % 7);
        const int rows = 6 + static_cast<int>(rng() % 7);
        std::vector<int> blocked;
        for (int i = 0; i < cols * rows; ++i) {
            if (std::uniform_real_distribution<>(0, 1)(rng) < 0.25) blocked.push_back(i);
        }
        const NodeGrid g = make_grid(cols, rows, blocked);
        int src = -1;
        for (int i = 0; i < g.node_count() && src < 0; ++i) {
            if (g.active(i)) src = i;
        }
        REQUIRE(src >= 0);
        const GridGraph graph = build_graph(g);
        const PathResult r = best_paths(graph, src, false);
        const std::vector<double> ref = dijkstra_reference(graph, src);
        for (int i = 0; i < g.node_count(); ++i) {
            const bool alg_reach = !std::isnan(r.dist[i]);
            const bool ref_reach = std::isfinite(ref[i]);
            CHECK(alg_reach == ref_reach);
            if (alg_reach) {
                CHECK(rel_diff(r.dist[i], ref[i]) < 1e-9);
                CHECK(r.v[i] >= 0.0);
            }
        }
    }
}

TEST_CASE("predecessor chain reproduces the reported distance") {
    const NodeGrid g = make_grid(9, 7, {4, 13, 22, 31, 30, 29});
    const GridGraph graph = build_graph(g);
    for (const bool angular : {false, true}) {
        const PathResult r = best_paths(graph, 0, angular);
        for (int i = 0; i < g.node_count(); ++i) {
            if (std::isnan(r.dist[i]) || i == 0) continue;
            double total = 0.0;
            int cur = i;
            int hops = 0;
            while (cur != 0) {
                REQUIRE(r.prev[cur] >= 0);
                const int p = r.prev[cur];
                bool found = false;
                for (const Arc& a : graph.neighbors(p)) {
                    if (a.to == cur) {
                        total += a.length;
                        found = true;
                        break;
                    }
                }
                REQUIRE(found);
                cur = p;
                REQUIRE(++hops <= graph.node_count);
            }
            CHECK(rel_diff(total, r.dist[i]) < 1e-9);
        }
    }
}

TEST_CASE("small starting value triggers rescaling without changing distances") {
    const NodeGrid g = make_grid(30, 1);
    const GridGraph graph = build_graph(g);
    const PathResult r = best_paths(graph, 0, false, 5.0);
    CHECK(r.rescale_count > 0);
    for (int i = 0; i < 30; ++i) {
        CHECK(rel_diff(r.dist[i], static_cast<double>(i)) < 1e-12);
        CHECK(r.v[i] >= 0.0);
    }
    CHECK_THROWS_AS(best_paths(graph, 0, false, 5.0, 2), std::runtime_error);
}

TEST_CASE("rescaling keeps the search sound on a two dimensional grid") {
    // A lift makes later turns relatively more expensive, so routes may differ
    // from a no-lift run; what must hold: same reachability, non-negative
    // values, a consistent predecessor chain, and no route shorter than the
    // plain optimum.
    const NodeGrid g = make_grid(12, 12, {14, 26, 38, 50, 62, 74, 86});
    const GridGraph graph = build_graph(g);
    const PathResult plain = best_paths(graph, 0, false);
    const PathResult small = best_paths(graph, 0, true, 8.0);
    CHECK(small.rescale_count > 0);
    for (int i = 0; i < g.node_count(); ++i) {
        CHECK(std::isnan(plain.dist[i]) == std::isnan(small.dist[i]));
        if (std::isnan(small.dist[i])) {
            CHECK(small.v[i] == -std::numeric_limits<double>::infinity());
            continue;
        }
        CHECK(small.v[i] >= 0.0);
        CHECK(small.dist[i] >= plain.dist[i] - 1e-9);
        if (i == 0) continue;
        double total = 0.0;
        int cur = i, hops = 0;
        while (cur != 0) {
            const int p = small.prev[cur];
            REQUIRE(p >= 0);
            bool found = false;
            for (const Arc& a : graph.neighbors(p)) {
                if (a.to == cur) {
                    total += a.length;
                    found = true;
                    break;
                }
            }
            REQUIRE(found);
            cur = p;
            REQUIRE(++hops <= graph.node_count);
        }
        CHECK(rel_diff(total, small.dist[i]) < 1e-9);
    }
}

TEST_CASE("both models agree with exhaustive search on open grids") {
    for (const auto& [cols, rows] : {std::pair{3, 3}, std::pair{4, 4}, std::pair{5, 3}}) {
        const NodeGrid g = make_grid(cols, rows);
        const GridGraph graph = build_graph(g);
        const auto oracle = enumerate_simple_paths_all(graph, 0);
        const PathResult plain = best_paths(graph, 0, false);
        const PathResult ang = best_paths(graph, 0, true);
        for (int i = 0; i < g.node_count(); ++i) {
            REQUIRE(oracle[i].reachable);
            CHECK(rel_diff(plain.dist[i], oracle[i].min_length) < 1e-12);
            CHECK(rel_diff(ang.v[i], oracle[i].value) < 1e-12);
            CHECK(rel_diff(ang.dist[i], oracle[i].value_path_length) < 1e-12);
        }
    }
}

TEST_CASE("search value never beats the simple-path optimum") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        const int cols = 3 + static_cast<int>(rng() % 3);
        const int rows = 3 + static_cast<int>(rng() % 3);
        std::vector<int> blocked;
        for (int i = 1; i < cols * rows; ++i) {
            if (std::uniform_real_distribution<>(0, 1)(rng) < 0.2) blocked.push_back(i);
        }
        const NodeGrid g = make_grid(cols, rows, blocked);
        if (cols * rows - static_cast<int>(blocked.size()) < 2) continue;
        const GridGraph graph = build_graph(g);
        const auto oracle = enumerate_simple_paths_all(graph, 0);
        const PathResult plain = best_paths(graph, 0, false);
        const PathResult ang = best_paths(graph, 0, true);
        for (int i = 0; i < g.node_count(); ++i) {
            const bool alg_reach = !std::isnan(plain.dist[i]);
            CHECK(alg_reach == oracle[i].reachable);
            CHECK(alg_reach == !std::isnan(ang.dist[i]));
            if (!alg_reach) continue;
            CHECK(rel_diff(plain.dist[i], oracle[i].min_length) < 1e-9);
            CHECK(ang.v[i] <= oracle[i].value + 1e-6 * std::abs(oracle[i].value));
        }
    }
}

TEST_CASE("distance field covers every candidate and node") {
    Environment env;
    env.width = 10;
    env.height = 10;
    NodeGrid g = rasterize(env);
    prune_enclosed(g);
    const auto candidates = candidate_locations(g, {0.0, 0.5, 1.0});
    const GridGraph graph = build_graph(g);

    const DistanceField sp = distance_field(graph, g, candidates, PathModel::shortest_path);
    CHECK(sp.model == "shortest_path");
    for (int t = 0; t < 4; ++t) {
        REQUIRE(sp.dist[t].size() == 3);
        for (std::size_t l = 0; l < 3; ++l) {
            const Point s = g.coord(candidates[t][l]);
            for (int i = 0; i < g.node_count(); ++i) {
                const Point p = g.coord(i);
                CHECK(rel_diff(sp.dist[t][l][i], octile(p.x - s.x, p.y - s.y)) < 1e-12);
            }
        }
    }

    const DistanceField eu = euclidean_distance_field(g, candidates);
    CHECK(eu.model == "euclidean");
    for (int t = 0; t < 4; ++t) {
        for (std::size_t l = 0; l < 3; ++l) {
            const Point s = g.coord(candidates[t][l]);
            for (int i = 0; i < g.node_count(); ++i) {
                const Point p = g.coord(i);
                const double dx = p.x - s.x, dy = p.y - s.y;
                CHECK(eu.dist[t][l][i] == std::sqrt(dx * dx + dy * dy));
            }
        }
    }
}

TEST_CASE("distance field rejects inactive sources") {
    NodeGrid g = make_grid(4, 4, {5});
    const GridGraph graph = build_graph(g);
    std::array<std::vector<int>, 4> candidates = {{{0}, {3}, {15}, {5}}};
    CHECK_THROWS_AS(distance_field(graph, g, candidates, PathModel::shortest_path),
                    std::invalid_argument);
}
