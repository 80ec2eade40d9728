#ifndef SAEGT_KDTREE_HPP_
#define SAEGT_KDTREE_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "saegt/geom2d.hpp"

namespace saegt {

/// Static 2D KD-tree over a point array. Built once, then queried for all
/// points within a radius of a position. Indices returned refer to the
/// input array.
class KdTree2 {
public:
    KdTree2() = default;

    explicit KdTree2(std::span<const Vec2> points)
        : points_(points.begin(), points.end()) {
        order_.resize(points_.size());
        std::iota(order_.begin(), order_.end(), 0u);
        if (!order_.empty()) build_(0, order_.size(), 0);
    }

    std::size_t size() const { return points_.size(); }

    /// Indices of all points with ||p - q|| <= radius, in ascending order.
    std::vector<std::uint32_t> radius_search(const Vec2& q, double radius) const {
        std::vector<std::uint32_t> out;
        if (!order_.empty() && radius >= 0.0)
            radius_search_(0, order_.size(), 0, q, radius * radius, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Indices of points inside the axis-aligned box [lo, hi].
    std::vector<std::uint32_t> box_search(const Vec2& lo, const Vec2& hi) const {
        std::vector<std::uint32_t> out;
        if (!order_.empty()) box_search_(0, order_.size(), 0, lo, hi, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    // order_[lo..hi) forms a subtree rooted at the median (nth_element
    // layout); axis alternates by depth.
    void build_(std::size_t lo, std::size_t hi, int axis) {
        if (hi - lo <= 1) return;
        const std::size_t mid = lo + (hi - lo) / 2;
        std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                         [&](std::uint32_t a, std::uint32_t b) {
                             return axis == 0 ? points_[a].x < points_[b].x
                                              : points_[a].y < points_[b].y;
                         });
        build_(lo, mid, 1 - axis);
        build_(mid + 1, hi, 1 - axis);
    }

    void radius_search_(std::size_t lo, std::size_t hi, int axis, const Vec2& q,
                        double r2, std::vector<std::uint32_t>& out) const {
        if (lo >= hi) return;
        const std::size_t mid = lo + (hi - lo) / 2;
        const Vec2& p = points_[order_[mid]];
        if ((p - q).squared_norm() <= r2) out.push_back(order_[mid]);
        const double diff = axis == 0 ? q.x - p.x : q.y - p.y;
        const double diff2 = diff * diff;
        if (diff <= 0.0 || diff2 <= r2) radius_search_(lo, mid, 1 - axis, q, r2, out);
        if (diff >= 0.0 || diff2 <= r2) radius_search_(mid + 1, hi, 1 - axis, q, r2, out);
    }

    void box_search_(std::size_t lo, std::size_t hi, int axis, const Vec2& blo,
                     const Vec2& bhi, std::vector<std::uint32_t>& out) const {
        if (lo >= hi) return;
        const std::size_t mid = lo + (hi - lo) / 2;
        const Vec2& p = points_[order_[mid]];
        if (p.x >= blo.x && p.x <= bhi.x && p.y >= blo.y && p.y <= bhi.y)
            out.push_back(order_[mid]);
        const double c = axis == 0 ? p.x : p.y;
        const double lo_bound = axis == 0 ? blo.x : blo.y;
        const double hi_bound = axis == 0 ? bhi.x : bhi.y;
        if (lo_bound <= c) box_search_(lo, mid, 1 - axis, blo, bhi, out);
        if (hi_bound >= c) box_search_(mid + 1, hi, 1 - axis, blo, bhi, out);
    }

    std::vector<Vec2> points_;
    std::vector<std::uint32_t> order_;
};

}  // namespace saegt

#endif  // SAEGT_KDTREE_HPP_
