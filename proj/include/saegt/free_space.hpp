#ifndef SAEGT_FREE_SPACE_HPP_
#define SAEGT_FREE_SPACE_HPP_

#include <span>
#include <stdexcept>
#include <vector>

#include "saegt/geom2d.hpp"
#include "saegt/grid.hpp"

namespace saegt {

class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Parameters of the safe-set -> free-space conversion. The *_for(delta)
/// defaults follow the grid resolution: clusters connect 8-neighbours,
/// hull edges longer than 3 cells get dug, the workspace keeps a 2-cell
/// border so obstacles form a closed ring.
struct FreeSpaceParams {
    double cluster_radius = 1.5;
    double edge_threshold = 3.0;
    double workspace_margin = 2.0;
    double snap_quantum = 1e-9;
    double degenerate_buffer = 0.5;

    static FreeSpaceParams defaults_for(double delta) {
        return {1.5 * delta, 3.0 * delta, 2.0 * delta, 1e-9 * delta, 0.5 * delta};
    }
};

/// Partition of the safe cell centers into connected components under
/// ||p - q|| <= radius. Components are ordered by their smallest cell
/// index and each lists points in cell-index order, so the output is
/// invariant under input permutation.
std::vector<std::vector<Vec2>> cluster_safe_points(const CellMask& safe,
                                                   const Grid& grid, double radius);

/// Concave hull by edge digging: starts from the convex hull and
/// repeatedly replaces any boundary edge longer than edge_threshold with
/// two edges through the nearest interior point, provided the polygon
/// stays simple. Vertices are a subset of the input points. Fewer than 3
/// distinct points, or collinear input, yield the bounding rectangle
/// buffered by degenerate_buffer instead.
Polygon concave_hull(std::span<const Vec2> points, double edge_threshold,
                     double degenerate_buffer);

/// Axis-aligned bounding rectangle of all hull vertices, expanded by
/// margin on each side. Throws std::invalid_argument when hulls is empty.
Rect workspace_bbox(std::span<const Polygon> hulls, double margin);

/// Boolean difference workspace \ (union of hulls). Coordinates are
/// snapped to a snap_quantum lattice first; on an invalid intermediate the
/// snap is retried 1000x coarser before a GeometryError is thrown. Output
/// polygons may carry holes (clockwise rings).
std::vector<Polygon> extract_obstacles(const Rect& workspace,
                                       std::span<const Polygon> hulls,
                                       double snap_quantum);

/// Polygonal model of the verified-safe terrain: one concave hull per
/// cluster, the enclosing workspace rectangle, and the complement as
/// pseudo-physical obstacles.
struct FreeSpaceModel {
    std::vector<Polygon> hulls;
    Rect workspace;
    std::vector<Polygon> obstacles;

    bool contains(const Vec2& p, double eps = 1e-9) const {
        for (const Polygon& h : hulls) {
            if (h.contains(p, eps)) return true;
        }
        return false;
    }
};

FreeSpaceModel build_free_space(const CellMask& safe, const Grid& grid,
                                const FreeSpaceParams& params);

}  // namespace saegt

#endif  // SAEGT_FREE_SPACE_HPP_
