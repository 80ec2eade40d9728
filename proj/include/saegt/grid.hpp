#ifndef SAEGT_GRID_HPP_
#define SAEGT_GRID_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "saegt/geom2d.hpp"

namespace saegt {

/// Cell coordinates: ix is the column (east), iy the row (north).
struct Cell {
    int ix = 0;
    int iy = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Regular 2D grid over the workspace. `origin` is the world position of
/// the center of cell (0,0); cell (0,0) sits at the south-west corner.
struct Grid {
    int width = 0;
    int height = 0;
    double resolution = 1.0;  // meters per cell
    Vec2 origin{0.0, 0.0};

    std::size_t cell_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * width + static_cast<std::size_t>(ix);
    }
    std::size_t index(const Cell& c) const { return index(c.ix, c.iy); }
    Cell cell_of(std::size_t idx) const {
        return {static_cast<int>(idx % width), static_cast<int>(idx / width)};
    }
    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < width && iy >= 0 && iy < height;
    }
    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + ix * resolution, origin.y + iy * resolution};
    }
    Vec2 cell_center(std::size_t idx) const {
        const Cell c = cell_of(idx);
        return cell_center(c.ix, c.iy);
    }

    /// Nearest cell to a world position, or nullopt outside the grid extent.
    std::optional<Cell> world_to_cell(const Vec2& p) const;

    /// World extent covered by the cells (half a cell beyond the outermost
    /// cell centers on each side).
    Rect extent() const {
        const double half = 0.5 * resolution;
        return {{origin.x - half, origin.y - half},
                {origin.x + (width - 1) * resolution + half,
                 origin.y + (height - 1) * resolution + half}};
    }

    /// Throws std::invalid_argument on non-positive dimensions/resolution.
    void validate() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Dense boolean mask over grid cells with a cached population count.
class CellMask {
public:
    CellMask() = default;
    explicit CellMask(std::size_t cells) : bits_(cells, 0) {}

    std::size_t size() const { return bits_.size(); }
    std::size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool test(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i) {
        if (!bits_[i]) {
            bits_[i] = 1;
            ++count_;
        }
    }
    void reset(std::size_t i) {
        if (bits_[i]) {
            bits_[i] = 0;
            --count_;
        }
    }

    /// Indices of set cells, ascending (row-major order).
    std::vector<std::uint32_t> indices() const;

    bool is_subset_of(const CellMask& other) const;

    friend bool operator==(const CellMask& a, const CellMask& b) {
        return a.bits_ == b.bits_;
    }

private:
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

/// Cells whose centers lie within `radius` of `center` (world units).
CellMask disk_cells(const Grid& grid, const Vec2& center, double radius);

}  // namespace saegt

#endif  // SAEGT_GRID_HPP_
