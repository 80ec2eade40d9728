#include "saegt/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saegt {

ConfidenceField init_confidence(const Grid& grid, const CellMask& s0, double h) {
    grid.validate();
    if (s0.size() != grid.cell_count())
        throw std::invalid_argument("init_confidence: mask does not match grid");
    if (s0.empty())
        throw std::invalid_argument("init_confidence: initial safe set is empty");
    if (!std::isfinite(h))
        throw std::invalid_argument("init_confidence: threshold must be finite");

    ConfidenceField field;
    field.lower.assign(grid.cell_count(), kLowerUnbounded);
    field.upper.assign(grid.cell_count(), kUpperUnbounded);
    for (std::size_t i = 0; i < s0.size(); ++i) {
        if (s0.test(i)) field.lower[i] = h;
    }
    return field;
}

ConfidenceField update_confidence(const ConfidenceField& prev,
                                  const PosteriorField& post, double beta) {
    if (post.means.size() != prev.size() || post.variances.size() != prev.size())
        throw std::invalid_argument("update_confidence: posterior does not cover field");
    if (!(beta >= 0.0))
        throw std::invalid_argument("update_confidence: beta must be >= 0");

    const double sqrt_beta = std::sqrt(beta);
    ConfidenceField next = prev;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const double half = sqrt_beta * std::sqrt(post.variances[i]);
        const double lo = std::max(prev.lower[i], post.means[i] - half);
        const double hi = std::min(prev.upper[i], post.means[i] + half);
        if (lo > hi) {
            ++next.empty_intersections;  // keep the previous interval
            continue;
        }
        next.lower[i] = lo;
        next.upper[i] = hi;
    }
    return next;
}

namespace {

// Half-width, in cells, of the scan box around a source cell whose reach
// is `radius` world units. Two extra cells absorb rounding; the predicate
// itself decides membership.
int scan_reach_cells(double radius, const Grid& grid) {
    const double limit = static_cast<double>(std::max(grid.width, grid.height)) + 2.0;
    const double cells = std::min(radius / grid.resolution + 2.0, limit);
    return static_cast<int>(cells);
}

}  // namespace

ExpandResult expand_safe(const CellMask& prev_safe, const ConfidenceField& conf,
                         double lipschitz, double h, const Grid& grid) {
    if (prev_safe.size() != grid.cell_count() || conf.size() != grid.cell_count())
        throw std::invalid_argument("expand_safe: sizes do not match grid");
    if (!(lipschitz >= 0.0))
        throw std::invalid_argument("expand_safe: Lipschitz constant must be >= 0");

    ExpandResult result;
    result.safe = CellMask(grid.cell_count());

    for (const std::uint32_t src : prev_safe.indices()) {
        const double lower = conf.lower[src];
        if (!(lower >= h)) continue;  // no reach at all, not even itself

        if (lipschitz == 0.0) {
            for (std::size_t i = 0; i < grid.cell_count(); ++i) result.safe.set(i);
            break;
        }

        const Cell c = grid.cell_of(src);
        const Vec2 center = grid.cell_center(c.ix, c.iy);
        const int reach = scan_reach_cells((lower - h) / lipschitz, grid);
        const int x0 = std::max(0, c.ix - reach), x1 = std::min(grid.width - 1, c.ix + reach);
        const int y0 = std::max(0, c.iy - reach), y1 = std::min(grid.height - 1, c.iy + reach);
        for (int iy = y0; iy <= y1; ++iy) {
            for (int ix = x0; ix <= x1; ++ix) {
                const std::size_t idx = grid.index(ix, iy);
                if (result.safe.test(idx)) continue;
                const double d = (grid.cell_center(ix, iy) - center).norm();
                if (lower - lipschitz * d >= h) result.safe.set(idx);
            }
        }
    }

    if (result.safe.empty()) {
        // The robot still occupies the previous safe set; keep it.
        result.safe = prev_safe;
        result.stalled = true;
    }
    return result;
}

std::vector<std::uint32_t> expansion_potential(const CellMask& safe,
                                               const ConfidenceField& conf,
                                               double lipschitz, double h,
                                               const Grid& grid) {
    if (safe.size() != grid.cell_count() || conf.size() != grid.cell_count())
        throw std::invalid_argument("expansion_potential: sizes do not match grid");
    if (!(lipschitz >= 0.0))
        throw std::invalid_argument("expansion_potential: Lipschitz constant must be >= 0");

    std::vector<std::uint32_t> potential(grid.cell_count(), 0);
    const std::uint32_t outside_count =
        static_cast<std::uint32_t>(grid.cell_count() - safe.count());

    for (const std::uint32_t src : safe.indices()) {
        const double upper = conf.upper[src];
        if (!(upper >= h)) continue;

        if (lipschitz == 0.0) {
            potential[src] = outside_count;
            continue;
        }

        const Cell c = grid.cell_of(src);
        const Vec2 center = grid.cell_center(c.ix, c.iy);
        const int reach = scan_reach_cells((upper - h) / lipschitz, grid);
        const int x0 = std::max(0, c.ix - reach), x1 = std::min(grid.width - 1, c.ix + reach);
        const int y0 = std::max(0, c.iy - reach), y1 = std::min(grid.height - 1, c.iy + reach);
        std::uint32_t count = 0;
        for (int iy = y0; iy <= y1; ++iy) {
            for (int ix = x0; ix <= x1; ++ix) {
                const std::size_t idx = grid.index(ix, iy);
                if (safe.test(idx)) continue;
                const double d = (grid.cell_center(ix, iy) - center).norm();
                if (upper - lipschitz * d >= h) ++count;
            }
        }
        potential[src] = count;
    }
    return potential;
}

CellMask frontier_cells(const CellMask& safe,
                        const std::vector<std::uint32_t>& potential) {
    CellMask frontier(safe.size());
    for (std::size_t i = 0; i < safe.size(); ++i) {
        if (safe.test(i) && potential[i] > 0) frontier.set(i);
    }
    return frontier;
}

}  // namespace saegt
