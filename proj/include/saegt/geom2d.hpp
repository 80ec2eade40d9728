#ifndef SAEGT_GEOM2D_HPP_
#define SAEGT_GEOM2D_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace saegt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double squared_norm() const { return x * x + y * y; }
    double norm() const { return std::sqrt(squared_norm()); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Cross product of (a-o) and (b-o); > 0 for a left turn.
inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);
double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// True when the open interiors of segments ab and cd intersect, or an
/// endpoint of one lies in the interior of the other. Sharing endpoints
/// does not count.
bool segments_properly_intersect(const Vec2& a, const Vec2& b,
                                 const Vec2& c, const Vec2& d);

/// Convex hull (monotone chain), counter-clockwise, collinear points dropped.
/// Returns fewer than 3 vertices for degenerate input.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Signed area of a ring (positive when counter-clockwise).
double ring_signed_area(std::span<const Vec2> ring);

/// Distance from p to the closed boundary of a ring.
double ring_boundary_distance(std::span<const Vec2> ring, const Vec2& p);

/// Closed point-in-ring test: points within eps of the boundary count as
/// inside. Crossing-number test away from the boundary.
bool ring_contains(std::span<const Vec2> ring, const Vec2& p, double eps = 1e-12);

/// True when no two non-adjacent edges of the ring intersect.
bool ring_is_simple(std::span<const Vec2> ring);

/// Simple polygon with optional holes. Outer ring counter-clockwise, hole
/// rings clockwise; rings are closed implicitly (no repeated last vertex).
struct Polygon {
    std::vector<Vec2> outer;
    std::vector<std::vector<Vec2>> holes;

    /// Net enclosed area (outer minus holes).
    double area() const;

    /// Closed containment: boundary points (outer or hole rings) count as
    /// inside, strict hole interiors count as outside.
    bool contains(const Vec2& p, double eps = 1e-12) const;

    double boundary_distance(const Vec2& p) const;
};

/// Axis-aligned rectangle.
struct Rect {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
    bool contains(const Vec2& p, double eps = 0.0) const {
        return p.x >= lo.x - eps && p.x <= hi.x + eps &&
               p.y >= lo.y - eps && p.y <= hi.y + eps;
    }
    /// Corners counter-clockwise starting at lo.
    std::array<Vec2, 4> corners() const {
        return {Vec2{lo.x, lo.y}, Vec2{hi.x, lo.y}, Vec2{hi.x, hi.y}, Vec2{lo.x, hi.y}};
    }
    Polygon to_polygon() const {
        Polygon p;
        const auto c = corners();
        p.outer.assign(c.begin(), c.end());
        return p;
    }
};

}  // namespace saegt

#endif  // SAEGT_GEOM2D_HPP_
