#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace arrayplan {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Polygon = std::vector<Point>;

inline double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(const Point& p, const Point& a, const Point& b) {
    if (cross(a, b, p) != 0.0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Boundary points count as inside.
inline bool point_in_polygon(const Point& p, const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[j];
        const Point& b = poly[i];
        if (on_segment(p, a, b)) return true;
        const bool crosses = (b.y > p.y) != (a.y > p.y);
        if (crosses) {
            double t = (p.y - b.y) / (a.y - b.y);
            double xi = b.x + t * (a.x - b.x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

namespace detail {

inline int sign(double v) { return (v > 0.0) - (v < 0.0); }

inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    int d1 = sign(cross(a, b, c));
    int d2 = sign(cross(a, b, d));
    int d3 = sign(cross(c, d, a));
    int d4 = sign(cross(c, d, b));
    if (d1 != d2 && d3 != d4) return true;
    if (d1 == 0 && on_segment(c, a, b)) return true;
    if (d2 == 0 && on_segment(d, a, b)) return true;
    if (d3 == 0 && on_segment(a, c, d)) return true;
    if (d4 == 0 && on_segment(b, c, d)) return true;
    return false;
}

} // namespace detail

// A polygon is simple when non-adjacent edges never touch and adjacent
// edges share only their common vertex.
inline bool polygon_is_simple(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        Point a1 = poly[i], a2 = poly[(i + 1) % n];
        if (a1.x == a2.x && a1.y == a2.y) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            Point b1 = poly[j], b2 = poly[(j + 1) % n];
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // shared endpoint is fine, doubling back over the edge is not
                Point shared = (j == i + 1) ? a2 : a1;
                Point p = (j == i + 1) ? a1 : a2;
                Point q = (j == i + 1) ? b2 : b1;
                double dot = (p.x - shared.x) * (q.x - shared.x) +
                             (p.y - shared.y) * (q.y - shared.y);
                if (cross(shared, p, q) == 0.0 && dot > 0.0) return false;
                continue;
            }
            if (detail::segments_intersect(a1, a2, b1, b2)) return false;
        }
    }
    return true;
}

} // namespace arrayplan
