#ifndef SAEGT_REGIONS_HPP_
#define SAEGT_REGIONS_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "saegt/gp_map.hpp"
#include "saegt/grid.hpp"

namespace saegt {

/// Unbounded interval ends are stored as the largest finite doubles so all
/// comparisons stay total.
inline constexpr double kLowerUnbounded = -std::numeric_limits<double>::max();
inline constexpr double kUpperUnbounded = std::numeric_limits<double>::max();

/// Per-cell traversability interval [lower, upper], iteratively intersected
/// with each new posterior band.
struct ConfidenceField {
    std::vector<double> lower;
    std::vector<double> upper;

    /// Cells whose new band did not overlap the running interval; those
    /// keep the previous interval instead of collapsing.
    std::uint64_t empty_intersections = 0;

    std::size_t size() const { return lower.size(); }
    double width(std::size_t i) const { return upper[i] - lower[i]; }
};

/// Initial field: cells in s0 get [h, +unbounded), everything else
/// (-unbounded, +unbounded). Throws std::invalid_argument when s0 is empty
/// or sized differently from the grid.
ConfidenceField init_confidence(const Grid& grid, const CellMask& s0, double h);

/// Intersects each cell's interval with [mu - sqrt(beta) sigma,
/// mu + sqrt(beta) sigma]. Non-overlapping bands leave the previous
/// interval unchanged and bump the diagnostic counter. Throws
/// std::invalid_argument when the posterior does not cover the field or
/// beta < 0.
ConfidenceField update_confidence(const ConfidenceField& prev,
                                  const PosteriorField& post, double beta);

struct ExpandResult {
    CellMask safe;
    /// True when the literal expansion produced an empty set (every lower
    /// bound below h) and the previous safe set was retained instead.
    bool stalled = false;
};

/// One Lipschitz expansion step: the union over source cells x in
/// prev_safe of every cell x' with lower(x) - L * ||x - x'|| >= h,
/// distances between cell centers in world units. Implemented with a
/// per-source radius cutoff; results equal the all-pairs evaluation
/// exactly.
ExpandResult expand_safe(const CellMask& prev_safe, const ConfidenceField& conf,
                         double lipschitz, double h, const Grid& grid);

/// Expansion potential per cell: for safe x, the number of non-safe cells
/// x' with upper(x) - L * ||x - x'|| >= h; zero for non-safe cells.
std::vector<std::uint32_t> expansion_potential(const CellMask& safe,
                                               const ConfidenceField& conf,
                                               double lipschitz, double h,
                                               const Grid& grid);

/// Safe cells with positive expansion potential.
CellMask frontier_cells(const CellMask& safe,
                        const std::vector<std::uint32_t>& potential);

}  // namespace saegt

#endif  // SAEGT_REGIONS_HPP_
