#include "saegt/geom2d.hpp"

#include <algorithm>
#include <limits>

namespace saegt {

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 <= 0.0) return a;
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return a + ab * t;
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    return distance(p, closest_point_on_segment(p, a, b));
}

namespace {

int sign_of(double v) {
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment_collinear(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_properly_intersect(const Vec2& a, const Vec2& b,
                                 const Vec2& c, const Vec2& d) {
    // Shared endpoints are allowed.
    if (a == c || a == d || b == c || b == d) return false;

    const int d1 = sign_of(cross(c, d, a));
    const int d2 = sign_of(cross(c, d, b));
    const int d3 = sign_of(cross(a, b, c));
    const int d4 = sign_of(cross(a, b, d));

    if (d1 * d2 < 0 && d3 * d4 < 0) return true;

    // Collinear overlap / endpoint-in-interior cases.
    if (d1 == 0 && on_segment_collinear(c, d, a)) return true;
    if (d2 == 0 && on_segment_collinear(c, d, b)) return true;
    if (d3 == 0 && on_segment_collinear(a, b, c)) return true;
    if (d4 == 0 && on_segment_collinear(a, b, d)) return true;
    return false;
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double ring_signed_area(std::span<const Vec2> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        acc += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    }
    return 0.5 * acc;
}

double ring_boundary_distance(std::span<const Vec2> ring, const Vec2& p) {
    const std::size_t n = ring.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    if (n == 1) return distance(p, ring[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        best = std::min(best, distance_to_segment(p, ring[j], ring[i]));
    }
    return best;
}

bool ring_contains(std::span<const Vec2> ring, const Vec2& p, double eps) {
    const std::size_t n = ring.size();
    if (n < 3) return ring_boundary_distance(ring, p) <= eps;
    if (ring_boundary_distance(ring, p) <= eps) return true;

    // Crossing number with a ray toward +x. The boundary strip above makes
    // the exact tie handling here irrelevant.
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = ring[j];
        const Vec2& b = ring[i];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (x_cross > p.x) inside = !inside;
        }
    }
    return inside;
}

bool ring_is_simple(std::span<const Vec2> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2& c = ring[j];
            const Vec2& d = ring[(j + 1) % n];
            if (segments_properly_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

double Polygon::area() const {
    double a = ring_signed_area(outer);
    for (const auto& h : holes) a += ring_signed_area(h);  // holes are CW: negative
    return a;
}

bool Polygon::contains(const Vec2& p, double eps) const {
    if (!ring_contains(outer, p, eps)) return false;
    for (const auto& h : holes) {
        // Strictly inside a hole means outside the polygon; hole boundaries
        // still belong to the polygon.
        if (ring_boundary_distance(h, p) > eps && ring_contains(h, p, 0.0)) return false;
    }
    return true;
}

double Polygon::boundary_distance(const Vec2& p) const {
    double best = ring_boundary_distance(outer, p);
    for (const auto& h : holes) best = std::min(best, ring_boundary_distance(h, p));
    return best;
}

}  // namespace saegt
