#include "saegt/free_space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "saegt/kdtree.hpp"

namespace bg = boost::geometry;

namespace saegt {

std::vector<std::vector<Vec2>> cluster_safe_points(const CellMask& safe,
                                                   const Grid& grid, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("cluster_safe_points: radius must be > 0");
    if (safe.size() != grid.cell_count())
        throw std::invalid_argument("cluster_safe_points: mask does not match grid");

    const std::vector<std::uint32_t> cells = safe.indices();
    std::vector<Vec2> points(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        points[i] = grid.cell_center(cells[i]);

    const KdTree2 tree(points);
    std::vector<std::uint8_t> visited(points.size(), 0);
    std::vector<std::vector<Vec2>> clusters;

    for (std::size_t seed = 0; seed < points.size(); ++seed) {
        if (visited[seed]) continue;
        std::vector<std::uint32_t> member_ids;
        std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(seed)};
        visited[seed] = 1;
        while (!queue.empty()) {
            const std::uint32_t cur = queue.front();
            queue.pop_front();
            member_ids.push_back(cur);
            for (const std::uint32_t nb : tree.radius_search(points[cur], radius)) {
                if (!visited[nb]) {
                    visited[nb] = 1;
                    queue.push_back(nb);
                }
            }
        }
        std::sort(member_ids.begin(), member_ids.end());
        std::vector<Vec2> cluster(member_ids.size());
        for (std::size_t i = 0; i < member_ids.size(); ++i)
            cluster[i] = points[member_ids[i]];
        clusters.push_back(std::move(cluster));
    }
    return clusters;  // seeds scan in cell-index order, so clusters are ordered
}

namespace {

bool nearly_collinear(std::span<const Vec2> pts) {
    // Largest triangle area over a reference edge; zero means collinear.
    const Vec2& a = pts.front();
    const Vec2* far = &a;
    double far_d2 = 0.0;
    for (const Vec2& p : pts) {
        const double d2 = (p - a).squared_norm();
        if (d2 > far_d2) {
            far_d2 = d2;
            far = &p;
        }
    }
    if (far_d2 == 0.0) return true;
    for (const Vec2& p : pts) {
        if (std::abs(cross(a, *far, p)) > 1e-12 * far_d2) return false;
    }
    return true;
}

Polygon buffered_bbox(std::span<const Vec2> pts, double buffer) {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const Vec2& p : pts) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    const Rect r{{lo.x - buffer, lo.y - buffer}, {hi.x + buffer, hi.y + buffer}};
    return r.to_polygon();
}

// Nearest unused interior point to segment ab, found through escalating
// box queries around the segment. Returns indices ordered by distance.
std::vector<std::uint32_t> dig_candidates(const KdTree2& tree,
                                          const std::vector<Vec2>& pts,
                                          const std::vector<std::uint8_t>& used,
                                          const Vec2& a, const Vec2& b,
                                          double start_radius, double max_radius) {
    std::vector<std::uint32_t> found;
    for (double r = start_radius; found.empty() && r <= max_radius * 2.0; r *= 2.0) {
        const Vec2 lo{std::min(a.x, b.x) - r, std::min(a.y, b.y) - r};
        const Vec2 hi{std::max(a.x, b.x) + r, std::max(a.y, b.y) + r};
        for (const std::uint32_t id : tree.box_search(lo, hi)) {
            if (used[id]) continue;
            if (distance_to_segment(pts[id], a, b) <= r) found.push_back(id);
        }
    }
    std::sort(found.begin(), found.end(), [&](std::uint32_t x, std::uint32_t y) {
        const double dx = distance_to_segment(pts[x], a, b);
        const double dy = distance_to_segment(pts[y], a, b);
        if (dx != dy) return dx < dy;
        return x < y;
    });
    return found;
}

}  // namespace

Polygon concave_hull(std::span<const Vec2> points, double edge_threshold,
                     double degenerate_buffer) {
    if (points.empty())
        throw std::invalid_argument("concave_hull: no input points");
    if (!(edge_threshold > 0.0))
        throw std::invalid_argument("concave_hull: edge_threshold must be > 0");

    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    if (pts.size() < 3 || nearly_collinear(pts))
        return buffered_bbox(pts, degenerate_buffer);

    std::vector<Vec2> boundary = convex_hull(pts);
    if (boundary.size() < 3) return buffered_bbox(pts, degenerate_buffer);

    const KdTree2 tree(pts);
    std::vector<std::uint8_t> used(pts.size(), 0);
    // Hull vertices are consumed; look points up by value.
    for (const Vec2& v : boundary) {
        const auto it = std::lower_bound(pts.begin(), pts.end(), v,
                                         [](const Vec2& a, const Vec2& b) {
                                             return a.x < b.x || (a.x == b.x && a.y < b.y);
                                         });
        if (it != pts.end() && *it == v)
            used[static_cast<std::size_t>(it - pts.begin())] = 1;
    }

    double diameter = 0.0;
    {
        Vec2 lo = boundary[0], hi = boundary[0];
        for (const Vec2& v : boundary) {
            lo.x = std::min(lo.x, v.x);
            lo.y = std::min(lo.y, v.y);
            hi.x = std::max(hi.x, v.x);
            hi.y = std::max(hi.y, v.y);
        }
        diameter = (hi - lo).norm();
    }

    // Repeatedly dig the longest edge above the threshold. Each dig
    // promotes one interior point to a vertex, so the loop terminates.
    std::vector<std::pair<Vec2, Vec2>> undiggable;
    const auto is_undiggable = [&](const Vec2& a, const Vec2& b) {
        for (const auto& [ua, ub] : undiggable) {
            if (ua == a && ub == b) return true;
        }
        return false;
    };

    for (;;) {
        std::size_t longest = boundary.size();
        double longest_len = edge_threshold;
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const Vec2& a = boundary[i];
            const Vec2& b = boundary[(i + 1) % boundary.size()];
            const double len = distance(a, b);
            if (len > longest_len && !is_undiggable(a, b)) {
                longest = i;
                longest_len = len;
            }
        }
        if (longest == boundary.size()) break;

        const Vec2 a = boundary[longest];
        const Vec2 b = boundary[(longest + 1) % boundary.size()];
        const auto candidates =
            dig_candidates(tree, pts, used, a, b, edge_threshold, diameter);

        // Dig to the nearest free point only. Any other input strictly
        // inside the cut triangle would be nearer to the edge than the
        // chosen point, so taking the nearest keeps every point inside
        // the hull. Digging a farther point instead could cut one off.
        bool dug = false;
        if (!candidates.empty()) {
            const std::uint32_t id = candidates.front();
            const Vec2& p = pts[id];
            const double d_edge = distance_to_segment(p, a, b);
            // collinear beyond an endpoint would fold a zero-area sliver
            const bool sliver = cross(a, p, b) == 0.0 && d_edge > 0.0;
            if (d_edge < longest_len && !sliver) {
                bool crosses = false;
                for (std::size_t i = 0; i < boundary.size() && !crosses; ++i) {
                    const Vec2& c = boundary[i];
                    const Vec2& d = boundary[(i + 1) % boundary.size()];
                    if (c == a && d == b) continue;  // the edge being replaced
                    if (segments_properly_intersect(a, p, c, d) ||
                        segments_properly_intersect(p, b, c, d) ||
                        distance_to_segment(p, c, d) < 1e-9 * longest_len)
                        crosses = true;
                }
                if (!crosses) {
                    boundary.insert(
                        boundary.begin() + static_cast<std::ptrdiff_t>(longest) + 1, p);
                    used[id] = 1;
                    dug = true;
                }
            }
        }
        if (!dug) undiggable.emplace_back(a, b);
    }

    Polygon hull;
    hull.outer = std::move(boundary);
    return hull;
}

Rect workspace_bbox(std::span<const Polygon> hulls, double margin) {
    if (hulls.empty())
        throw std::invalid_argument("workspace_bbox: no hulls");
    if (!(margin >= 0.0))
        throw std::invalid_argument("workspace_bbox: margin must be >= 0");
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const Polygon& h : hulls) {
        for (const Vec2& v : h.outer) {
            lo.x = std::min(lo.x, v.x);
            lo.y = std::min(lo.y, v.y);
            hi.x = std::max(hi.x, v.x);
            hi.y = std::max(hi.y, v.y);
        }
    }
    return {{lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin}};
}

namespace {

using BoostPoint = bg::model::d2::point_xy<double>;
using BoostPolygon = bg::model::polygon<BoostPoint, /*ClockWise=*/false>;
using BoostMulti = bg::model::multi_polygon<BoostPolygon>;

double snap(double v, double quantum) {
    return quantum > 0.0 ? std::round(v / quantum) * quantum : v;
}

BoostPolygon to_boost(const Polygon& poly, double quantum) {
    BoostPolygon out;
    for (const Vec2& v : poly.outer)
        bg::append(out.outer(), BoostPoint(snap(v.x, quantum), snap(v.y, quantum)));
    out.inners().resize(poly.holes.size());
    for (std::size_t i = 0; i < poly.holes.size(); ++i) {
        for (const Vec2& v : poly.holes[i])
            bg::append(out.inners()[i], BoostPoint(snap(v.x, quantum), snap(v.y, quantum)));
    }
    bg::correct(out);
    return out;
}

Polygon from_boost(const BoostPolygon& poly) {
    Polygon out;
    const auto& ring = poly.outer();
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)  // drop closing point
        out.outer.push_back({bg::get<0>(ring[i]), bg::get<1>(ring[i])});
    for (const auto& inner : poly.inners()) {
        std::vector<Vec2> hole;
        for (std::size_t i = 0; i + 1 < inner.size(); ++i)
            hole.push_back({bg::get<0>(inner[i]), bg::get<1>(inner[i])});
        out.holes.push_back(std::move(hole));
    }
    return out;
}

std::vector<Polygon> difference_once(const Rect& workspace,
                                     std::span<const Polygon> hulls, double quantum) {
    BoostPolygon ws;
    for (const Vec2& v : workspace.corners())
        bg::append(ws.outer(), BoostPoint(snap(v.x, quantum), snap(v.y, quantum)));
    bg::correct(ws);

    BoostMulti subtrahend;
    for (const Polygon& h : hulls) {
        BoostPolygon bp = to_boost(h, quantum);
        if (!bg::is_valid(bp)) throw GeometryError("invalid hull polygon");
        BoostMulti merged;
        bg::union_(subtrahend, bp, merged);
        subtrahend = std::move(merged);
    }

    BoostMulti result;
    bg::difference(ws, subtrahend, result);

    std::vector<Polygon> obstacles;
    obstacles.reserve(result.size());
    for (const BoostPolygon& p : result) {
        Polygon poly = from_boost(p);
        if (std::abs(poly.area()) > 0.0) obstacles.push_back(std::move(poly));
    }
    std::sort(obstacles.begin(), obstacles.end(), [](const Polygon& a, const Polygon& b) {
        const Vec2& va = a.outer.front();
        const Vec2& vb = b.outer.front();
        return va.x < vb.x || (va.x == vb.x && va.y < vb.y);
    });
    return obstacles;
}

}  // namespace

std::vector<Polygon> extract_obstacles(const Rect& workspace,
                                       std::span<const Polygon> hulls,
                                       double snap_quantum) {
    try {
        return difference_once(workspace, hulls, snap_quantum);
    } catch (const GeometryError&) {
        // Retry on a coarser lattice before giving up.
    } catch (const std::exception&) {
    }
    return difference_once(workspace, hulls, snap_quantum * 1000.0);
}

FreeSpaceModel build_free_space(const CellMask& safe, const Grid& grid,
                                const FreeSpaceParams& params) {
    const auto clusters = cluster_safe_points(safe, grid, params.cluster_radius);
    if (clusters.empty())
        throw std::invalid_argument("build_free_space: empty safe set");

    FreeSpaceModel model;
    model.hulls.reserve(clusters.size());
    for (const auto& cluster : clusters)
        model.hulls.push_back(
            concave_hull(cluster, params.edge_threshold, params.degenerate_buffer));
    model.workspace = workspace_bbox(model.hulls, params.workspace_margin);
    model.obstacles =
        extract_obstacles(model.workspace, model.hulls, params.snap_quantum);
    return model;
}

}  // namespace saegt
