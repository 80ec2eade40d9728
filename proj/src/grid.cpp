#include "saegt/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace saegt {

std::optional<Cell> Grid::world_to_cell(const Vec2& p) const {
    const int ix = static_cast<int>(std::llround((p.x - origin.x) / resolution));
    const int iy = static_cast<int>(std::llround((p.y - origin.y) / resolution));
    if (!in_bounds(ix, iy)) return std::nullopt;
    return Cell{ix, iy};
}

void Grid::validate() const {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("grid: width and height must be positive");
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw std::invalid_argument("grid: resolution must be positive and finite");
    if (!origin.finite())
        throw std::invalid_argument("grid: origin must be finite");
}

std::vector<std::uint32_t> CellMask::indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

bool CellMask::is_subset_of(const CellMask& other) const {
    if (bits_.size() != other.bits_.size()) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] && !other.bits_[i]) return false;
    }
    return true;
}

CellMask disk_cells(const Grid& grid, const Vec2& center, double radius) {
    CellMask mask(grid.cell_count());
    if (!(radius >= 0.0)) return mask;
    const double r2 = radius * radius;
    const int cx = static_cast<int>(std::llround((center.x - grid.origin.x) / grid.resolution));
    const int cy = static_cast<int>(std::llround((center.y - grid.origin.y) / grid.resolution));
    const int reach = static_cast<int>(std::ceil(radius / grid.resolution)) + 1;
    for (int iy = cy - reach; iy <= cy + reach; ++iy) {
        for (int ix = cx - reach; ix <= cx + reach; ++ix) {
            if (!grid.in_bounds(ix, iy)) continue;
            if ((grid.cell_center(ix, iy) - center).squared_norm() <= r2)
                mask.set(grid.index(ix, iy));
        }
    }
    return mask;
}

}  // namespace saegt
